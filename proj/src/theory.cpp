#include "robinopt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "robinopt/ball.hpp"
#include "robinopt/search.hpp"
#include "robinopt/specfun.hpp"

namespace robinopt::theory {

namespace {

using ball::BallSpec;
using ball::unit_ball_volume;

double lambda1_of_volume(int N, double volume, double alpha) {
  return ball::ball_eigenvalue(BallSpec::with_volume(N, volume), alpha, 0, 1);
}

// Radius at which the (ell, k) family of a ball has eigenvalue Lambda. With
// z = r sqrt(Lambda) the Robin equation becomes one equation in z, whose
// root lies between consecutive zeros of J_nu.
double family_radius(int N, double alpha, double Lambda, int ell, int k) {
  const double s = std::sqrt(Lambda);
  const double a = alpha / s;
  const double nu = ell + 0.5 * N - 1.0;
  auto f = [&](double z) { return ball::robin_ball_equation(N, ell, a * z, z); };
  const double hi = specfun::bessel_j_zero(nu, k);
  double lo;
  if (k > 1) {
    lo = specfun::bessel_j_zero(nu, k - 1);
  } else {
    lo = 0.5 * hi;
    while (!(f(lo) > 0.0)) {
      lo *= 0.5;
      if (lo < 1e-300) throw std::runtime_error("ball catalog: family root not bracketed");
    }
  }
  const auto br = specfun::RootBracket::make(f, lo, hi);
  return specfun::find_root(f, br, 4.0 * std::numeric_limits<double>::epsilon() * hi) / s;
}

struct Family {
  double radius;
  int mult;
};

// Cheapest way to collect n eigenvalues below Lambda; parts[i] indexes vols.
std::pair<double, std::vector<int>> knapsack(const std::vector<double>& vols, int n) {
  std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
  std::vector<int> choice(n + 1, 0);
  best[0] = 0.0;
  for (int m = 1; m <= n; ++m) {
    for (int j = 1; j <= m; ++j) {
      const double v = vols[j - 1] + best[m - j];
      if (v < best[m]) {
        best[m] = v;
        choice[m] = j;
      }
    }
  }
  std::vector<int> parts;
  for (int m = n; m > 0; m -= choice[m]) parts.push_back(choice[m]);
  std::sort(parts.rbegin(), parts.rend());
  return {best[n], parts};
}

template <class TotalVolume>
double equalise(TotalVolume&& total, double V, double hi) {
  auto f = [&](double L) { return total(L) - V; };
  double lo = 0.5 * hi;
  while (!(f(lo) > 0.0)) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw std::runtime_error("ball catalog: eigenvalue not bracketed");
  }
  while (!(f(hi) < 0.0)) {
    if (f(hi) == 0.0) return hi;
    lo = hi;
    hi *= 2.0;
  }
  return specfun::find_root(f, specfun::RootBracket::make(f, lo, hi), 1e-14 * hi);
}

}  // namespace

std::string partition_label(std::span<const int> parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(parts[i]);
  }
  return s;
}

std::string BallUnion::label() const { return partition_label(parts); }

std::vector<std::vector<int>> partitions(int n, int max_parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rest, int cap) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == max_parts) return;
    for (int p = std::min(rest, cap); p >= 1; --p) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  if (n >= 1 && max_parts >= 1) rec(n, n);
  return out;
}

BallCatalog::BallCatalog(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("ball catalog: dimension must be >= 1");
}

std::vector<double> BallCatalog::min_volumes(double alpha, double Lambda, int jmax) const {
  if (!(alpha > 0.0) || !(Lambda > 0.0)) throw std::invalid_argument("ball catalog: need alpha, Lambda > 0");
  std::vector<Family> fam;
  auto threshold = [&]() {
    std::sort(fam.begin(), fam.end(), [](auto x, auto y) { return x.radius < y.radius; });
    int seen = 0;
    for (const auto& f : fam) {
      seen += f.mult;
      if (seen >= jmax) return f.radius;
    }
    return std::numeric_limits<double>::infinity();
  };
  for (int ell = 0;; ++ell) {
    const int mult = ball::harmonic_multiplicity(dim_, ell);
    const double limit = threshold();
    const double r1 = family_radius(dim_, alpha, Lambda, ell, 1);
    if (r1 > limit) break;
    fam.push_back({r1, mult});
    for (int k = 2; k <= jmax; ++k) {
      const double r = family_radius(dim_, alpha, Lambda, ell, k);
      if (r > threshold()) break;
      fam.push_back({r, mult});
    }
  }
  threshold();
  const double w = unit_ball_volume(dim_);
  std::vector<double> vols;
  for (const auto& f : fam) {
    for (int m = 0; m < f.mult && static_cast<int>(vols.size()) < jmax; ++m) vols.push_back(w * std::pow(f.radius, dim_));
  }
  return vols;
}

BallUnion BallCatalog::best(int n, double V, double alpha) const {
  if (n < 1 || !(V > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("ball catalog: need n >= 1, V, alpha > 0");
  auto total = [&](double L) { return knapsack(min_volumes(alpha, L, n), n).first; };
  // n equal balls is one admissible union, so its value is an upper bracket.
  const double hi = lambda1_of_volume(dim_, V / n, alpha);
  const double L = equalise(total, V, hi);
  const auto vols = min_volumes(alpha, L, n);
  BallUnion u;
  u.lambda = L;
  u.parts = knapsack(vols, n).second;
  for (int p : u.parts) u.volumes.push_back(vols[p - 1]);
  // Share the rounding residue so volumes add up to V.
  double sum = 0.0;
  for (double v : u.volumes) sum += v;
  for (double& v : u.volumes) v *= V / sum;
  return u;
}

BallUnion BallCatalog::for_partition(std::span<const int> parts, double V, double alpha) const {
  if (parts.empty() || !(V > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("ball catalog: bad partition query");
  const int jmax = *std::max_element(parts.begin(), parts.end());
  if (*std::min_element(parts.begin(), parts.end()) < 1) throw std::invalid_argument("ball catalog: parts must be >= 1");
  auto total = [&](double L) {
    const auto vols = min_volumes(alpha, L, jmax);
    double s = 0.0;
    for (int p : parts) s += vols[p - 1];
    return s;
  };
  double hi = 0.0;
  for (int p : parts) hi = std::max(hi, ball::ball_lambda_k(BallSpec::with_volume(dim_, V / parts.size()), alpha, p));
  const double L = equalise(total, V, hi);
  const auto vols = min_volumes(alpha, L, jmax);
  BallUnion u;
  u.lambda = L;
  u.parts.assign(parts.begin(), parts.end());
  std::sort(u.parts.rbegin(), u.parts.rend());
  double sum = 0.0;
  for (int p : u.parts) {
    u.volumes.push_back(vols[p - 1]);
    sum += vols[p - 1];
  }
  for (double& v : u.volumes) v *= V / sum;
  return u;
}

StarEvaluator BallCatalog::evaluator(int n) const {
  return {n, [cat = *this, n](double V, double alpha) { return cat.lambda_star(n, V, alpha); }};
}

TwoBallSplit two_ball_split(int N, double V, double alpha, int k1, int k2, double tol) {
  if (k1 < 1 || k2 < 1 || !(V > 0.0)) throw std::invalid_argument("two_ball_split: bad arguments");
  auto g = [&](double f) {
    const double l1 = ball::ball_lambda_k(BallSpec::with_volume(N, f * V), alpha, k1);
    const double l2 = ball::ball_lambda_k(BallSpec::with_volume(N, (1.0 - f) * V), alpha, k2);
    return std::max(l1, l2);
  };
  const auto m = golden_section(g, 1e-9, 1.0 - 1e-9, tol);
  return {m.x, m.value};
}

WKResult wolf_keller_combine(int n, int N, double V, double alpha, std::span<const StarEvaluator> evaluators) {
  if (n < 2) throw std::invalid_argument("wolf_keller_combine: n must be >= 2");
  if (static_cast<int>(evaluators.size()) < n - 1) {
    throw std::invalid_argument("wolf_keller_combine: need evaluators for 1 .. n-1");
  }
  for (int j = 1; j < n; ++j) {
    if (evaluators[j - 1].n != j) throw std::invalid_argument("wolf_keller_combine: evaluators out of order");
  }
  const double halfN = 0.5 * N;
  WKResult res;
  res.value = std::numeric_limits<double>::infinity();
  for (int k = 1; k < n; ++k) {
    const auto& e1 = evaluators[k - 1].eval;
    const auto& e2 = evaluators[n - k - 1].eval;
    auto t2_of = [&](double t1) { return std::pow(1.0 - std::pow(t1, -N), -1.0 / N); };
    // Left side increases and right side decreases in t1.
    auto phi = [&](double t1) {
      const double t2 = t2_of(t1);
      return t1 * t1 * e1(V, alpha / t1) - t2 * t2 * e2(V, alpha / t2);
    };
    double lo = 1.0 + 1e-6, hi = 2.0;
    double flo = phi(lo);
    for (int i = 0; i < 200 && !(phi(hi) > 0.0); ++i) hi *= 2.0;
    for (int i = 0; i < 40 && !(flo < 0.0); ++i) {
      lo = 1.0 + 0.01 * (lo - 1.0);
      flo = phi(lo);
    }
    const double fhi = phi(hi);
    if (!(flo < 0.0 && fhi > 0.0)) {
      throw MonotonicityError("wolf_keller_combine: scale equation has no sign change for k = " + std::to_string(k));
    }
    const double t1 = specfun::find_root(phi, {lo, hi, flo, fhi}, 1e-10);
    const double t2 = t2_of(t1);
    const double v = std::pow(e1(V, alpha / t1), halfN) + std::pow(e2(V, alpha / t2), halfN);
    res.per_k_values.push_back(v);
    res.per_k_xi1.push_back(t1);
    if (v < res.value) {
      res.value = v;
      res.k = k;
      res.xi1 = t1;
      res.xi2 = t2;
    }
  }
  return res;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::n_ball: return "n_ball";
    case BoundKind::gap_comp: return "gap_comp";
    case BoundKind::gap_explicit: return "gap_explicit";
    case BoundKind::fig_est: return "fig_est";
  }
  return "unknown";
}

BoundsReport n_ball_bound(int N, double V, double alpha, int n) {
  if (N < 1 || !(V > 0.0) || !(alpha > 0.0) || n < 1) throw std::invalid_argument("n_ball_bound: bad arguments");
  BoundsReport r;
  r.kind = BoundKind::n_ball;
  r.n = n;
  r.alpha = alpha;
  r.lhs = lambda1_of_volume(N, V / n, alpha);
  r.rhs = N * alpha * std::pow(n * unit_ball_volume(N) / V, 1.0 / N);
  r.satisfied = r.lhs <= r.rhs + 1e-12;
  return r;
}

double bstar_radius(int N, double V, double alpha, double lambda_n_star) {
  if (!(lambda_n_star > 0.0) || !(V > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("bstar_radius: bad arguments");
  const double w = unit_ball_volume(N);
  const double jz = specfun::bessel_j_zero(0.5 * N - 1.0, 1);
  const double upper = std::min(V, w * std::pow(jz / std::sqrt(lambda_n_star), N));
  auto f = [&](double b) { return lambda1_of_volume(N, b, std::pow(V / (V + b), 1.0 / N) * alpha) - lambda_n_star; };
  const double fu = f(upper);
  if (!(fu < 0.0)) throw std::domain_error("bstar_radius: no root below the volume bound");
  double lo = 1e-3 * upper;
  double fl = f(lo);
  for (int i = 0; i < 60 && !(fl > 0.0); ++i) {
    lo *= 1e-3;
    fl = f(lo);
  }
  if (!(fl > 0.0)) throw std::domain_error("bstar_radius: no root above zero volume");
  const double b = specfun::find_root(f, {lo, upper, fl, fu}, 1e-12 * upper);
  return std::pow(b / w, 1.0 / N);
}

double gap_bound_comp_rhs(int N, double V, double alpha, double lambda_n_star) {
  const double w = unit_ball_volume(N);
  const double r = bstar_radius(N, V, alpha, lambda_n_star);
  const double B = w * std::pow(r, N);
  const double rt = std::pow(V * B / (V + B), 1.0 / N) * std::pow(w, -1.0 / N);
  return w / V * std::pow(ball::ball_eigenvalue({N, 1.0}, rt * alpha, 0, 1), 0.5 * N);
}

BoundsReport gap_bound_comp(int N, double V, double alpha, int n, double lambda_n_star, double lambda_n1_star) {
  BoundsReport r;
  r.kind = BoundKind::gap_comp;
  r.n = n;
  r.alpha = alpha;
  r.lhs = std::pow(lambda_n1_star, 0.5 * N) - std::pow(lambda_n_star, 0.5 * N);
  r.rhs = gap_bound_comp_rhs(N, V, alpha, lambda_n_star);
  r.satisfied = r.lhs <= r.rhs + 1e-12;
  return r;
}

double gap_bound_explicit(int N, double V, double alpha) {
  if (!(V > 0.0) || !(alpha >= 0.0)) throw std::invalid_argument("gap_bound_explicit: bad arguments");
  const double w = unit_ball_volume(N);
  return w / V * std::pow(ball::ball_eigenvalue({N, 1.0}, std::pow(V / w, 1.0 / N) * alpha, 0, 1), 0.5 * N);
}

BoundsReport gap_explicit_report(int N, double V, double alpha, int n, double lambda_n_star, double lambda_n1_star) {
  BoundsReport r;
  r.kind = BoundKind::gap_explicit;
  r.n = n;
  r.alpha = alpha;
  r.lhs = std::pow(lambda_n1_star, 0.5 * N) - std::pow(lambda_n_star, 0.5 * N);
  r.rhs = gap_bound_explicit(N, V, alpha);
  r.satisfied = r.lhs < r.rhs + 1e-12;
  return r;
}

double gap_verification_quantity(int n, double alpha, double lambda_n_star, double lambda_n1_star) {
  (void)n;
  const double pi = std::numbers::pi;
  const double r = bstar_radius(2, 1.0, alpha, lambda_n_star);
  const double B = pi * r * r;
  const double c = std::sqrt(B / (1.0 + B)) / std::sqrt(pi) * alpha;
  return lambda_n1_star - lambda_n_star - pi * ball::ball_eigenvalue({2, 1.0}, c, 0, 1);
}

BoundsReport fig_est_report(int n, double alpha, double lambda_n_star, double lambda_n1_star) {
  BoundsReport r;
  r.kind = BoundKind::fig_est;
  r.n = n;
  r.alpha = alpha;
  r.lhs = gap_verification_quantity(n, alpha, lambda_n_star, lambda_n1_star);
  r.rhs = 0.0;
  r.satisfied = r.lhs <= 0.0;
  return r;
}

RemarkCheck remark_gap_check(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("remark_gap_check: alpha must be > 0");
  RemarkCheck c;
  c.lambda2_star = lambda1_of_volume(2, 0.5, alpha);
  c.via_scaling = 2.0 * lambda1_of_volume(2, 1.0, alpha / std::numbers::sqrt2);
  c.twice_lambda1 = 2.0 * lambda1_of_volume(2, 1.0, alpha);
  c.holds = c.lambda2_star < c.twice_lambda1;
  return c;
}

bool remark_gap_inequality_check(double alpha) { return remark_gap_check(alpha).holds; }

TrendReport trend_checks(const BallCatalog& catalog, double V, double alpha, int n_max) {
  if (n_max < 2) throw std::invalid_argument("trend_checks: n_max must be >= 2");
  const int N = catalog.dim();
  TrendReport t;
  for (int n = 1; n <= n_max; ++n) t.lambda_star.push_back(catalog.lambda_star(n, V, alpha));
  for (int n = 1; n < n_max; ++n) {
    t.gaps.push_back(std::pow(t.lambda_star[n], 0.5 * N) - std::pow(t.lambda_star[n - 1], 0.5 * N));
  }
  t.monotone_from = static_cast<int>(t.gaps.size());
  while (t.monotone_from > 1 && t.gaps[t.monotone_from - 2] >= t.gaps[t.monotone_from - 1]) --t.monotone_from;
  for (int n = 1; n <= n_max; ++n) {
    t.max_growth_ratio = std::max(t.max_growth_ratio, t.lambda_star[n - 1] / std::pow(n, 1.0 / N));
  }
  t.growth_ceiling = N * alpha * std::pow(unit_ball_volume(N) / V, 1.0 / N);
  t.bounded = t.max_growth_ratio <= t.growth_ceiling * (1.0 + 1e-12);
  return t;
}

double star_scaling_defect(const StarEvaluator& ev, int N, double V, double alpha, double t) {
  const double a = t * t * ev.eval(V, alpha / t);
  const double b = ev.eval(std::pow(t, -N) * V, alpha);
  return std::abs(a - b) / std::abs(b);
}

}  // namespace robinopt::theory

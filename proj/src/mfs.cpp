#include "robinopt/mfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "robinopt/ball.hpp"
#include "robinopt/parallel.hpp"
#include "robinopt/search.hpp"
#include "robinopt/specfun.hpp"

namespace robinopt::mfs {

namespace {

using cd = std::complex<double>;
constexpr cd kQuarterI{0.0, 0.25};

double frac(double x) { return x - std::floor(x); }

void normalize_columns(Eigen::MatrixXcd& M) {
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    const double n = M.col(j).norm();
    if (n > 0.0) M.col(j) /= n;
  }
}

Eigen::VectorXd ascending(const Eigen::VectorXd& v) { return v.reverse(); }

// Everything needed to evaluate the singularity measure at one resolution.
struct Problem {
  Discretization disc;
  double alpha;

  double sigma1(double lambda) const { return subspace_measure(disc, alpha, lambda)(0); }
};

struct Root {
  double lambda;
  Eigen::VectorXd sv;
};

// Golden section down to a fraction of the dip, then repeated fits of
// |c (lambda - lambda*)| through points straddling the minimum.
double refine_minimum(const std::function<double(double)>& g, double a, double b, double tol) {
  const double coarse = std::max(tol, (b - a) / 64.0);
  auto m = golden_section(g, a, b, coarse);
  double x = m.x;
  double h = std::max(m.hi - m.lo, tol);
  double best = m.value;
  for (int it = 0; it < 12; ++it) {
    const double lo = x - h, hi = x + h;
    const double slo = g(lo), shi = g(hi);
    if (!(slo + shi > 0.0)) break;
    const double xs = lo + slo * (hi - lo) / (slo + shi);
    const double sx = g(xs);
    const double moved = std::abs(xs - x);
    if (sx <= best) {
      best = sx;
      x = xs;
    }
    if (h <= tol) break;
    // Near an end of the window the root may lie outside; keep the width.
    const bool edge = (xs - lo) < 0.05 * (hi - lo) || (hi - xs) < 0.05 * (hi - lo);
    if (!edge) h = std::max(tol, std::min(0.1 * h, 4.0 * moved));
  }
  return x;
}

std::pair<double, double> resolve_window(const MultiDomain& domain, double alpha, int count, const MfsConfig& cfg) {
  auto [lo, hi] = auto_window(domain, alpha, count);
  if (cfg.lambda_min > 0.0) lo = cfg.lambda_min;
  if (cfg.lambda_max > 0.0) hi = cfg.lambda_max;
  if (!(lo < hi)) throw std::invalid_argument("mfs: empty scan window");
  return {lo, hi};
}

// All eigenvalues detected in [lo, hi] (each distinct value once, with its
// multiplicity), not truncated to a count.
std::vector<Eigenpair> find_roots(const MultiDomain& domain, double alpha, int count, const MfsConfig& cfg,
                                  double lo, double hi) {
  const Problem fine{Discretization::build(domain, cfg), alpha};
  const Problem coarse{Discretization::build(domain, cfg, cfg.scan_np_fraction), alpha};

  // Uniform in sqrt(lambda), where eigenvalue spacing is roughly even.
  const double klo = std::sqrt(lo), khi = std::sqrt(hi);
  const int points = std::max(cfg.scan_points, 48 * count + 48);
  const double kstep = cfg.scan_step > 0.0 ? cfg.scan_step : (khi - klo) / points;
  const int n = static_cast<int>(std::ceil((khi - klo) / kstep)) + 1;
  std::vector<double> grid(n), g(n);
  for (int i = 0; i < n; ++i) {
    const double k = std::min(khi, klo + i * kstep);
    grid[i] = k * k;
  }
  parallel_for(n, [&](std::size_t i) { g[i] = coarse.sigma1(grid[i]); });

  std::vector<std::pair<double, double>> brackets;
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? g[i - 1] : std::numeric_limits<double>::infinity();
    const double right = i + 1 < n ? g[i + 1] : std::numeric_limits<double>::infinity();
    if (!(g[i] <= left && g[i] < right) && !(g[i] < left && g[i] <= right)) continue;
    const double a = i > 0 ? grid[i - 1] : std::pow(std::max(0.5 * klo, klo - kstep), 2);
    const double b = i + 1 < n ? grid[i + 1] : std::pow(khi + kstep, 2);
    brackets.emplace_back(a, b);
  }

  auto sigma = [&](double l) { return fine.sigma1(l); };
  std::vector<Root> roots(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t k) {
    const double x = refine_minimum(sigma, brackets[k].first, brackets[k].second, cfg.refine_tol);
    roots[k] = {x, subspace_measure(fine.disc, alpha, x)};
  });

  // A small second singular value at a simple root signals a neighbour
  // inside the same scan dip; look for it on both sides.
  std::vector<Root> extra;
  for (const auto& r : roots) {
    if (r.sv(0) > cfg.singularity_threshold || r.sv.size() < 2) continue;
    const double mult_thr = std::max(cfg.multiplicity_factor * r.sv(0), cfg.multiplicity_floor);
    if (!(r.sv(1) > mult_thr && r.sv(1) < cfg.cluster_probe)) continue;
    for (double dir : {-1.0, 1.0}) {
      const double edge = std::pow(std::max(0.5 * klo, std::sqrt(r.lambda) + dir * kstep), 2);
      auto sigma2 = [&](double l) { return subspace_measure(fine.disc, alpha, l)(1); };
      const double a = std::min(r.lambda, edge), b = std::max(r.lambda, edge);
      const double cross = golden_section(sigma2, a, b, 1e-3 * (b - a)).x;
      const double a2 = std::min(cross, edge), b2 = std::max(cross, edge);
      const double x = refine_minimum(sigma, a2, b2, cfg.refine_tol);
      if (std::abs(x - r.lambda) > 1e3 * cfg.refine_tol && x > a2 && x < b2) {
        extra.push_back({x, subspace_measure(fine.disc, alpha, x)});
      }
    }
  }
  roots.insert(roots.end(), extra.begin(), extra.end());

  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.lambda < y.lambda; });
  std::vector<Eigenpair> out;
  for (const auto& r : roots) {
    if (!(r.sv(0) <= cfg.singularity_threshold)) continue;
    if (!out.empty() && std::abs(r.lambda - out.back().lambda) <= std::max(1e3 * cfg.refine_tol, 1e-9 * r.lambda)) {
      if (r.sv(0) < out.back().residual) out.back().lambda = r.lambda, out.back().residual = r.sv(0);
      continue;
    }
    const double thr = std::max(cfg.multiplicity_factor * r.sv(0), cfg.multiplicity_floor);
    int m = 0;
    while (m < r.sv.size() && r.sv(m) <= thr) ++m;
    out.push_back({r.lambda, r.sv(0), std::max(m, 1), std::nullopt});
  }
  return out;
}

std::vector<Eigenpair> expand(const std::vector<Eigenpair>& distinct) {
  std::vector<Eigenpair> out;
  for (const auto& e : distinct) {
    for (int m = 0; m < e.multiplicity; ++m) out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  return out;
}

}  // namespace

void MfsConfig::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("mfs config: gamma must be > 0");
  if (lambda_min < 0.0) throw std::invalid_argument("mfs config: lambda_min must be >= 0");
  if (lambda_min > 0.0 && lambda_max > 0.0 && !(lambda_min < lambda_max)) {
    throw std::invalid_argument("mfs config: lambda_min must be < lambda_max");
  }
  if (scan_step > 0.0 && lambda_max > 0.0 && !(scan_step < (lambda_max - lambda_min) / 10.0)) {
    throw std::invalid_argument("mfs config: scan_step must be below a tenth of the window");
  }
  if (scan_points < 10) throw std::invalid_argument("mfs config: scan_points must be >= 10");
  if (!(refine_tol > 0.0) || !(singularity_threshold > 0.0)) {
    throw std::invalid_argument("mfs config: tolerances must be > 0");
  }
  if (!(scan_np_fraction > 0.0 && scan_np_fraction <= 1.0)) {
    throw std::invalid_argument("mfs config: scan_np_fraction must lie in (0, 1]");
  }
}

std::vector<double> EigResult::lambdas() const {
  std::vector<double> out;
  for (const auto& e : eigenvalues) out.push_back(e.lambda);
  return out;
}

std::vector<int> default_np(const MultiDomain& domain) {
  std::vector<int> np;
  for (const auto& c : domain.components) np.push_back(std::max(80, 16 * (c.harmonics() + 1)));
  return np;
}

Discretization Discretization::build(const MultiDomain& domain, const MfsConfig& cfg, double np_scale) {
  domain.validate();
  std::vector<int> np = cfg.np_per_component.empty() ? default_np(domain) : cfg.np_per_component;
  if (np.size() != domain.size()) throw std::invalid_argument("mfs: np_per_component size mismatch");
  std::vector<double> gamma;
  for (std::size_t c = 0; c < domain.size(); ++c) {
    const int m = domain.components[c].harmonics();
    np[c] = std::max(8 * (m + 1), static_cast<int>(std::lround(np[c] * np_scale)));
    gamma.push_back(cfg.gamma * domain.components[c].mean_radius());
  }

  Discretization d;
  d.boundary = geometry::boundary_points(domain, np);
  d.sources = geometry::source_points(domain, d.boundary, gamma);

  // Quasi-random interior points (additive recurrence on two irrationals).
  constexpr double g1 = 0.7548776662466927, g2 = 0.5698402909980532;
  for (std::size_t c = 0; c < domain.size(); ++c) {
    const auto& shape = domain.components[c];
    const int ni = std::max(8, static_cast<int>(std::lround(cfg.interior_fraction * np[c])));
    for (int j = 1; j <= ni; ++j) {
      const double t = frac((j + cfg.seed) * g1);
      const double u = frac((j + cfg.seed) * g2);
      const double theta = 2.0 * std::numbers::pi * t;
      const double rho = (0.1 + 0.8 * std::sqrt(u)) * shape.radius(theta);
      d.interior.push_back({shape.center[0] + rho * std::cos(theta), shape.center[1] + rho * std::sin(theta)});
    }
  }
  return d;
}

Eigen::MatrixXcd assemble(const Discretization& disc, double alpha, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("assemble: lambda must be > 0");
  const double k = std::sqrt(lambda);
  const int n = disc.size();
  Eigen::MatrixXcd A(n, n);
  for (int j = 0; j < n; ++j) {
    const auto& y = disc.sources[j];
    for (int i = 0; i < n; ++i) {
      const auto& bp = disc.boundary[i];
      const double dx = bp.x[0] - y[0], dy = bp.x[1] - y[1];
      const double d = std::hypot(dx, dy);
      if (d < 1e-12) throw std::invalid_argument("assemble: coincident collocation and source points");
      const double cosn = (dx * bp.normal[0] + dy * bp.normal[1]) / d;
      const cd h0 = specfun::hankel1(0, k * d);
      const cd h1 = specfun::hankel1(1, k * d);
      A(i, j) = kQuarterI * (-k * h1 * cosn + alpha * h0);
    }
  }
  return A;
}

Eigen::MatrixXcd assemble(const MultiDomain& domain, double alpha, double lambda, const MfsConfig& cfg) {
  return assemble(Discretization::build(domain, cfg), alpha, lambda);
}

Eigen::MatrixXcd assemble_interior(const Discretization& disc, double lambda) {
  const double k = std::sqrt(lambda);
  const int rows = static_cast<int>(disc.interior.size());
  const int n = disc.size();
  Eigen::MatrixXcd B(rows, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double d = std::hypot(disc.interior[i][0] - disc.sources[j][0], disc.interior[i][1] - disc.sources[j][1]);
      B(i, j) = kQuarterI * specfun::hankel1(0, k * d);
    }
  }
  return B;
}

double singularity_measure(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("singularity_measure: matrix must be square");
  if (A.size() == 0) return 0.0;
  Eigen::MatrixXcd M = A;
  normalize_columns(M);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues().minCoeff();
}

Eigen::VectorXd subspace_singular_values(const Eigen::MatrixXcd& boundary, const Eigen::MatrixXcd& interior) {
  const Eigen::Index n = boundary.cols();
  Eigen::MatrixXcd M(boundary.rows() + interior.rows(), n);
  M << boundary, interior;
  normalize_columns(M);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
  const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(M.rows(), n);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(Q.topRows(boundary.rows()));
  return ascending(svd.singularValues());
}

Eigen::VectorXd subspace_measure(const Discretization& disc, double alpha, double lambda) {
  // Robin rows grow like sqrt(lambda) + alpha against the interior rows; for
  // stiff alpha they would leave only a hairline dip.
  const double s = 1.0 / (1.0 + alpha / std::sqrt(lambda));
  return subspace_singular_values(s * assemble(disc, alpha, lambda), assemble_interior(disc, lambda));
}

std::pair<double, double> auto_window(const MultiDomain& domain, double alpha, int count) {
  // Robin eigenvalues lie below the Dirichlet ones, which lie below those of
  // the inscribed disks (domain monotonicity).
  std::vector<double> dirichlet;
  for (const auto& c : domain.components) {
    const double rho = c.min_radius();
    for (int ell = 0; ell < count + 1; ++ell) {
      for (int k = 1; k <= count; ++k) {
        const double j = specfun::bessel_j_zero(ell, k) / rho;
        for (int m = 0; m < (ell == 0 ? 1 : 2); ++m) dirichlet.push_back(j * j);
      }
    }
  }
  std::sort(dirichlet.begin(), dirichlet.end());
  double hi = dirichlet[count - 1];
  if (count == 1) {
    // Concavity in alpha: lambda_1 <= alpha * perimeter / area for every component.
    for (const auto& c : domain.components) hi = std::min(hi, alpha * geometry::perimeter(c) / geometry::area(c));
  }
  hi *= 1.05;
  // Faber-Krahn for the Robin problem: lambda_1 is at least that of the equal-area disk.
  const double lo = 0.9 * ball::ball_eigenvalue(ball::BallSpec::with_volume(2, domain.total_area()), alpha, 0, 1);
  return {lo, hi};
}

EigResult eigenvalues(const MultiDomain& domain, double alpha, int count, const MfsConfig& cfg) {
  cfg.validate();
  domain.validate();
  if (count < 1) throw std::invalid_argument("eigenvalues: count must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("eigenvalues: alpha must be > 0");
  const auto [lo, hi] = resolve_window(domain, alpha, count, cfg);

  std::vector<Eigenpair> distinct;
  if (cfg.decouple_components && domain.size() > 1) {
    const auto np = cfg.np_per_component.empty() ? default_np(domain) : cfg.np_per_component;
    for (std::size_t c = 0; c < domain.size(); ++c) {
      MfsConfig sub = cfg;
      sub.np_per_component = {np[c]};
      sub.decouple_components = false;
      auto found = find_roots(MultiDomain({domain.components[c]}), alpha, count, sub, lo, hi);
      for (auto& e : found) e.component_hint = static_cast<int>(c);
      distinct.insert(distinct.end(), found.begin(), found.end());
    }
  } else {
    distinct = find_roots(domain, alpha, count, cfg, lo, hi);
  }

  EigResult res;
  res.eigenvalues = expand(distinct);
  if (static_cast<int>(res.eigenvalues.size()) < count) {
    throw NotEnoughEigenvalues("eigenvalues: found " + std::to_string(res.eigenvalues.size()) + " of " +
                               std::to_string(count) + " in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                               "]");
  }
  res.eigenvalues.resize(count);
  return res;
}

double validate_against_ball(double radius, double alpha, int n, const MfsConfig& cfg) {
  const MultiDomain disk({geometry::ShapeFourier::disk(radius)});
  const auto res = eigenvalues(disk, alpha, n, cfg);
  const double exact = ball::ball_lambda_k({2, radius}, alpha, n);
  return std::abs(res.eigenvalues[n - 1].lambda - exact) / exact;
}

}  // namespace robinopt::mfs

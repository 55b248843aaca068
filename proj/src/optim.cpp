#include "robinopt/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "robinopt/parallel.hpp"
#include "robinopt/search.hpp"
#include "robinopt/theory.hpp"

namespace robinopt::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Eval {
  std::vector<double> lambdas;
  double objective = kInf;
};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

MultiDomain normalized(const MultiDomain& layout, std::span<const double> x, bool centers, double V) {
  return geometry::normalize_area(unpack(layout, x, centers), V);
}

// The normalised domain at x, or nothing if it is not a valid, separable shape.
std::optional<MultiDomain> admissible(const MultiDomain& layout, std::span<const double> x, bool centers, double V,
                                      const mfs::MfsConfig& mfs) {
  try {
    MultiDomain d = normalized(layout, x, centers, V);
    d.validate();
    mfs::Discretization::build(d, mfs);
    return d;
  } catch (const geometry::InvalidShape&) {
    return std::nullopt;
  }
}

// Objective state shared by the gradient and the line search.
struct Objective {
  double alpha;
  int n;
  const mfs::MfsConfig& mfs;
  int active = 0;
  double omega = 0.0;

  double value(std::span<const double> lam) const {
    if (active == 0) return lam[n - 1];
    const std::vector<double> om(active, omega);
    for (int j = 1; j <= active; ++j) {
      if (!(lam[n - j] - lam[n - j - 1] > 0.0)) return kInf;
    }
    return clustered_objective(lam, n, active, om);
  }

  Eval operator()(const MultiDomain& d) const {
    Eval e;
    try {
      e.lambdas = lambdas(d, alpha, n, mfs);
      e.objective = value(e.lambdas);
    } catch (const std::exception&) {
      e.objective = kInf;
    }
    return e;
  }
};

std::vector<double> gradient(const Objective& obj, const MultiDomain& layout, std::span<const double> x, double f0,
                             bool centers, const OptimConfig& cfg) {
  std::vector<double> g(x.size());
  parallel_for(x.size(), [&](std::size_t i) {
    std::vector<double> xp(x.begin(), x.end());
    xp[i] += cfg.fd_step;
    MultiDomain d = normalized(layout, xp, centers, cfg.volume);
    const double v = obj(d).objective;
    if (!std::isfinite(v)) throw std::runtime_error("fd_gradient: perturbed domain could not be evaluated");
    g[i] = (v - f0) / cfg.fd_step;
  });
  return g;
}

}  // namespace

void OptimConfig::validate() const {
  if (!(volume > 0.0)) throw std::invalid_argument("optim config: volume must be > 0");
  if (!(fd_step > 0.0)) throw std::invalid_argument("optim config: fd_step must be > 0");
  if (!(cluster_threshold > 0.0 && cluster_threshold < 1.0)) {
    throw std::invalid_argument("optim config: cluster_threshold must lie in (0, 1)");
  }
  if (!(omega0 > 0.0) || !(omega_ratio > 0.0 && omega_ratio < 1.0)) {
    throw std::invalid_argument("optim config: omega schedule must be positive and strictly decreasing");
  }
  if (omega_advance_every < 1 || stall_window < 1) throw std::invalid_argument("optim config: windows must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("optim config: max_iters must be >= 0");
  if (!(line_search_tol > 0.0 && line_search_tol < 1.0)) {
    throw std::invalid_argument("optim config: line_search_tol must lie in (0, 1)");
  }
  if (!(stall_tol >= 0.0) || !(x_max > 0.0)) throw std::invalid_argument("optim config: bad stall_tol or x_max");
}

double OptimConfig::omega(int m) const { return omega0 * std::pow(omega_ratio, m); }

bool optimizes_centers(const MultiDomain& domain) { return domain.size() > 1; }

std::vector<double> pack(const MultiDomain& domain, bool with_centers) {
  std::vector<double> x;
  for (const auto& c : domain.components) {
    x.push_back(c.a0);
    x.insert(x.end(), c.a.begin(), c.a.end());
    x.insert(x.end(), c.b.begin(), c.b.end());
  }
  if (with_centers) {
    for (std::size_t i = 1; i < domain.size(); ++i) {
      x.push_back(domain.components[i].center[0]);
      x.push_back(domain.components[i].center[1]);
    }
  }
  return x;
}

MultiDomain unpack(const MultiDomain& layout, std::span<const double> x, bool with_centers) {
  MultiDomain out = layout;
  std::size_t k = 0;
  auto take = [&]() {
    if (k >= x.size()) throw std::invalid_argument("unpack: coefficient vector too short");
    return x[k++];
  };
  for (auto& c : out.components) {
    c.a0 = take();
    for (auto& v : c.a) v = take();
    for (auto& v : c.b) v = take();
  }
  if (with_centers) {
    for (std::size_t i = 1; i < out.size(); ++i) {
      out.components[i].center[0] = take();
      out.components[i].center[1] = take();
    }
  }
  if (k != x.size()) throw std::invalid_argument("unpack: coefficient vector too long");
  return out;
}

std::vector<double> lambdas(const MultiDomain& domain, double alpha, int n, const mfs::MfsConfig& mfs) {
  mfs::MfsConfig cfg = mfs;
  if (domain.size() > 1) cfg.decouple_components = true;
  auto lam = mfs::eigenvalues(domain, alpha, n, cfg).lambdas();
  lam.resize(n);
  return lam;
}

std::vector<double> fd_gradient(const MultiDomain& domain, double alpha, int n, const OptimConfig& cfg,
                                const mfs::MfsConfig& mfs) {
  cfg.validate();
  const bool centers = optimizes_centers(domain);
  const Objective obj{alpha, n, mfs};
  // the perturbed points are renormalised, so the base point must be too
  const MultiDomain base = geometry::normalize_area(domain, cfg.volume);
  const double f0 = obj.value(lambdas(base, alpha, n, mfs));
  const auto x = pack(base, centers);
  return gradient(obj, base, x, f0, centers, cfg);
}

double centered_directional_derivative(const MultiDomain& domain, double alpha, int n, std::span<const double> direction,
                                       const OptimConfig& cfg, const mfs::MfsConfig& mfs) {
  const bool centers = optimizes_centers(domain);
  const MultiDomain base = geometry::normalize_area(domain, cfg.volume);
  const auto x = pack(base, centers);
  if (direction.size() != x.size()) throw std::invalid_argument("centered_directional_derivative: size mismatch");
  auto at = [&](double h) {
    std::vector<double> xp(x);
    for (std::size_t i = 0; i < xp.size(); ++i) xp[i] += h * direction[i];
    return lambdas(normalized(base, xp, centers, cfg.volume), alpha, n, mfs)[n - 1];
  };
  const double h = 10.0 * cfg.fd_step;
  return (at(h) - at(-h)) / (2.0 * h);
}

double clustered_objective(std::span<const double> lambda_values, int n, int active_count,
                           std::span<const double> omegas) {
  if (n < 1 || static_cast<int>(lambda_values.size()) < n) {
    throw std::invalid_argument("clustered_objective: need at least n eigenvalues");
  }
  if (active_count < 0 || active_count > n - 1 || static_cast<int>(omegas.size()) < active_count) {
    throw std::invalid_argument("clustered_objective: bad active_count");
  }
  double v = lambda_values[n - 1];
  for (int j = 1; j <= active_count; ++j) {
    const double gap = lambda_values[n - j] - lambda_values[n - j - 1];
    if (!(gap > 0.0)) throw std::domain_error("clustered_objective: nonpositive gap below lambda_" + std::to_string(n - j + 1));
    v -= omegas[j - 1] * std::log(gap);
  }
  return v;
}

MinimizeResult minimize(const MultiDomain& domain0, double alpha, int n, const OptimConfig& cfg,
                        const mfs::MfsConfig& mfs) {
  cfg.validate();
  domain0.validate();
  const bool centers = optimizes_centers(domain0);
  const MultiDomain layout = domain0;
  MultiDomain cur = geometry::normalize_area(domain0, cfg.volume);
  std::vector<double> x = pack(cur, centers);
  const double rscale = std::sqrt(cfg.volume / std::numbers::pi);

  Objective obj{alpha, n, mfs};
  int m = 0;
  Eval now = obj(cur);
  if (now.lambdas.empty()) throw std::runtime_error("minimize: initial domain could not be evaluated");

  // Gaps below lambda_n join the barrier one by one, from the top.
  auto activate = [&]() {
    while (obj.active < n - 1) {
      const int j = obj.active + 1;
      const double gap = now.lambdas[n - j] - now.lambdas[n - j - 1];
      if (!(gap > 0.0 && gap < cfg.cluster_threshold * now.lambdas[n - 1])) break;
      ++obj.active;
    }
    obj.omega = cfg.omega(m);
    now.objective = obj.value(now.lambdas);
  };
  activate();

  MinimizeResult res;
  auto record = [&](double step) {
    res.trace.iterates.push_back({x, now.lambdas, now.objective, step, obj.active, obj.active ? obj.omega : 0.0});
  };
  record(0.0);

  std::vector<double> history{now.objective};
  int since_advance = 0;
  auto advance = [&]() {
    ++m;
    since_advance = 0;
    activate();
    history.assign(1, now.objective);
  };

  res.trace.stop_reason = "max_iters";
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (obj.active > 0 && since_advance >= cfg.omega_advance_every) advance();
    ++since_advance;

    const auto g = gradient(obj, layout, x, now.objective, centers, cfg);
    const double gn = norm2(g);
    if (!(gn > 0.0)) {
      res.trace.stop_reason = "zero_gradient";
      break;
    }
    std::vector<double> dir(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) dir[i] = -g[i] / gn * rscale;
    auto point = [&](double s) {
      std::vector<double> xs(x);
      for (std::size_t i = 0; i < xs.size(); ++i) xs[i] += s * dir[i];
      return xs;
    };

    double xmax = cfg.x_max;
    while (xmax > 1e-12 && !admissible(layout, point(xmax), centers, cfg.volume, mfs)) xmax *= 0.5;

    auto h = [&](double s) {
      const auto d = admissible(layout, point(s), centers, cfg.volume, mfs);
      return d ? obj(*d).objective : kInf;
    };
    const auto best = golden_section(h, 0.0, xmax, cfg.line_search_tol * xmax);

    if (best.value < now.objective) {
      cur = normalized(layout, point(best.x), centers, cfg.volume);
      x = pack(cur, centers);
      now = obj(cur);
      activate();
      record(best.x);
      history.push_back(now.objective);
    } else if (obj.active > 0 && obj.omega > 1e-10) {
      advance();
      continue;
    } else {
      res.trace.stop_reason = "no_descent";
      break;
    }

    if (static_cast<int>(history.size()) > cfg.stall_window) {
      const double old = history[history.size() - 1 - cfg.stall_window];
      if ((old - now.objective) < cfg.stall_tol * std::abs(old)) {
        if (obj.active > 0 && obj.omega > 1e-10) {
          advance();
        } else {
          res.trace.stop_reason = "stall";
          break;
        }
      }
    }
  }

  mfs::MfsConfig fcfg = mfs;
  if (cur.size() > 1) fcfg.decouple_components = true;
  res.trace.final_eigs = mfs::eigenvalues(cur, alpha, n, fcfg).eigenvalues;
  res.domain = cur;
  return res;
}

MultiDomain seed_domain(std::span<const int> parts, double V, double alpha, int harmonics) {
  const auto u = theory::BallCatalog(2).for_partition(parts, V, alpha);
  MultiDomain d;
  double rmax = 0.0;
  for (double v : u.volumes) rmax = std::max(rmax, std::sqrt(v / std::numbers::pi));
  double x = 0.0;
  for (std::size_t i = 0; i < u.volumes.size(); ++i) {
    const double r = std::sqrt(u.volumes[i] / std::numbers::pi);
    if (i > 0) x += r;
    auto c = geometry::ShapeFourier::disk(r, {x, 0.0});
    c.a.assign(harmonics, 0.0);
    c.b.assign(harmonics, 0.0);
    d.components.push_back(c);
    x += r + 1.5 * rmax;
  }
  return d;
}

TopologyResult topology_sweep(double alpha, int n, const std::vector<std::vector<int>>& partitions,
                              const OptimConfig& cfg, const mfs::MfsConfig& mfs, int harmonics) {
  cfg.validate();
  if (n < 1) throw std::invalid_argument("topology_sweep: n must be >= 1");
  const theory::BallCatalog catalog(2);
  TopologyResult res;
  for (const auto& parts : partitions) {
    int sum = 0;
    for (int p : parts) sum += p;
    if (parts.empty() || static_cast<int>(parts.size()) > n || sum != n) {
      throw std::invalid_argument("topology_sweep: partition " + theory::partition_label(parts) + " does not split n");
    }
    TopologyCandidate c;
    c.parts = parts;
    c.label = theory::partition_label(parts);
    c.seed = seed_domain(parts, cfg.volume, alpha, harmonics);
    c.seed_lambda = catalog.for_partition(parts, cfg.volume, alpha).lambda;
    if (cfg.max_iters > 0) {
      auto r = minimize(c.seed, alpha, n, cfg, mfs);
      c.domain = std::move(r.domain);
      c.trace = std::move(r.trace);
      c.lambda_n = c.trace.iterates.back().lambda_values[n - 1];
    } else {
      c.domain = c.seed;
      c.lambda_n = lambdas(c.seed, alpha, n, mfs)[n - 1];
    }
    res.candidates.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < res.candidates.size(); ++i) {
    if (res.best < 0 || res.candidates[i].lambda_n < res.candidates[res.best].lambda_n) res.best = static_cast<int>(i);
  }
  if (n >= 2) {
    std::vector<theory::StarEvaluator> ev;
    for (int k = 1; k < n; ++k) ev.push_back(catalog.evaluator(k));
    res.wolf_keller_lambda = theory::wolf_keller_combine(n, 2, cfg.volume, alpha, ev).value;
  }
  return res;
}

}  // namespace robinopt::optim

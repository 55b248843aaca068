#include "robinopt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "robinopt/ball.hpp"
#include "robinopt/geometry.hpp"
#include "robinopt/io.hpp"
#include "robinopt/mfs.hpp"
#include "robinopt/optim.hpp"
#include "robinopt/parallel.hpp"
#include "robinopt/theory.hpp"

namespace robinopt::cli {

namespace {

namespace fs = std::filesystem;
using io::format_double;

struct UsageError : std::runtime_error {
  UsageError(const std::string& flag, const std::string& msg) : std::runtime_error(flag + ": " + msg) {}
};

// Shared flag storage; each subcommand registers the subset it uses.
struct Flags {
  std::string shape;
  std::string alpha;
  std::string alpha_grid;
  std::string n;
  int count = 4;
  int dim = 2;
  double volume = 1.0;
  std::string out;
  int np = 0;
  double gamma = 0.0;
  unsigned seed = 0;
  bool svg = false;
  bool fig_est = false;
  bool decouple = false;
  bool catalog_only = false;
  int max_iters = -1;
  int harmonics = -1;
  int max_components = 0;
  int iters = 0;
  std::string mfs_config;
  std::string optim_config;
};

double parse_real(const std::string& flag, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(flag, "not a number: '" + s + "'");
  }
}

int parse_int(const std::string& flag, const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(flag, "not an integer: '" + s + "'");
  }
}

// "5" or "a..b" (inclusive).
std::vector<int> parse_int_range(const std::string& flag, const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) return {parse_int(flag, s)};
  const int a = parse_int(flag, s.substr(0, dots));
  const int b = parse_int(flag, s.substr(dots + 2));
  if (b < a) throw UsageError(flag, "empty range '" + s + "'");
  std::vector<int> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

// "a..b:step" (inclusive of b up to rounding).
std::vector<double> parse_real_grid(const std::string& flag, const std::string& s) {
  const auto dots = s.find("..");
  const auto colon = s.find(':');
  if (dots == std::string::npos || colon == std::string::npos || colon < dots) {
    throw UsageError(flag, "expected a..b:step, got '" + s + "'");
  }
  const double a = parse_real(flag, s.substr(0, dots));
  const double b = parse_real(flag, s.substr(dots + 2, colon - dots - 2));
  const double h = parse_real(flag, s.substr(colon + 1));
  if (!(h > 0.0) || b < a) throw UsageError(flag, "need a <= b and step > 0 in '" + s + "'");
  std::vector<double> v;
  const auto steps = static_cast<long>(std::floor((b - a) / h + 1e-9));
  if (steps > 100000) throw UsageError(flag, "grid too large");
  for (long i = 0; i <= steps; ++i) v.push_back(a + i * h);
  return v;
}

std::vector<double> parse_real_list(const std::string& flag, const std::string& s) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    v.push_back(parse_real(flag, tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return v;
}

std::vector<double> alphas(const Flags& f, std::vector<double> fallback = {}) {
  std::vector<double> v;
  if (!f.alpha.empty()) v = parse_real_list("--alpha", f.alpha);
  else if (!f.alpha_grid.empty()) v = parse_real_grid("--alpha-grid", f.alpha_grid);
  else v = std::move(fallback);
  if (v.empty()) throw UsageError("--alpha", "required (or --alpha-grid)");
  for (double a : v) {
    if (!(a > 0.0)) throw UsageError(f.alpha.empty() ? "--alpha-grid" : "--alpha", "values must be > 0");
  }
  return v;
}

int single_n(const Flags& f, int fallback = 0) {
  if (f.n.empty()) {
    if (fallback > 0) return fallback;
    throw UsageError("--n", "required");
  }
  const auto v = parse_int_range("--n", f.n);
  if (v.size() != 1) throw UsageError("--n", "this command takes a single value");
  if (v[0] < 1) throw UsageError("--n", "must be >= 1");
  return v[0];
}

io::json load_json(const std::string& flag, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(flag, "cannot open '" + path + "'");
  try {
    return io::json::parse(in);
  } catch (const io::json::exception& e) {
    throw UsageError(flag, e.what());
  }
}

mfs::MfsConfig mfs_config(const Flags& f, std::size_t components) {
  mfs::MfsConfig c;
  if (!f.mfs_config.empty()) {
    try {
      c = io::mfs_config_from_json(load_json("--mfs-config", f.mfs_config));
    } catch (const std::invalid_argument& e) {
      throw UsageError("--mfs-config", e.what());
    }
  }
  if (f.np > 0) c.np_per_component.assign(components, f.np);
  if (f.gamma > 0.0) c.gamma = f.gamma;
  c.seed = f.seed;
  if (f.decouple) c.decouple_components = true;
  return c;
}

optim::OptimConfig optim_config(const Flags& f) {
  optim::OptimConfig c;
  if (!f.optim_config.empty()) {
    try {
      c = io::optim_config_from_json(load_json("--optim-config", f.optim_config));
    } catch (const std::invalid_argument& e) {
      throw UsageError("--optim-config", e.what());
    }
  }
  c.volume = f.volume;
  if (f.max_iters >= 0) c.max_iters = f.max_iters;
  return c;
}

io::ShapeFile load_shape(const Flags& f, bool volume_given) {
  if (f.shape.empty()) throw UsageError("--shape", "required");
  if (!fs::exists(f.shape)) throw UsageError("--shape", "no such file '" + f.shape + "'");
  io::ShapeFile s;
  try {
    s = io::read_shape(f.shape);
  } catch (const io::FormatError& e) {
    throw UsageError("--shape", e.what());
  }
  if (volume_given) s.V = f.volume;
  if (f.harmonics >= 0) {
    for (auto& c : s.domain.components) {
      if (static_cast<int>(c.a.size()) < f.harmonics) {
        c.a.resize(f.harmonics, 0.0);
        c.b.resize(f.harmonics, 0.0);
      }
    }
  }
  try {
    s.domain.validate();
  } catch (const geometry::InvalidShape& e) {
    throw UsageError("--shape", e.what());
  }
  s.domain = geometry::normalize_area(s.domain, s.V);
  return s;
}

// Writes and echoes a table.
void emit(const Flags& f, std::ostream& out, const std::string& name, const io::CsvTable& t, bool echo = true) {
  if (echo) out << t.str();
  if (!f.out.empty()) t.write(fs::path(f.out) / (name + ".csv"));
}

void emit_svg(const Flags& f, const std::string& name, const std::vector<io::Series>& s, const std::string& title,
              const std::string& xl, const std::string& yl) {
  if (!f.svg) return;
  io::write_text(fs::path(f.out) / (name + ".svg"), io::svg_plot(s, title, xl, yl));
}

std::string b2s(bool b) { return b ? "true" : "false"; }

int cmd_eigs(const Flags& f, bool volume_given, std::ostream& out) {
  if (f.count < 1) throw UsageError("--count", "must be >= 1");
  const auto shape = load_shape(f, volume_given);
  const auto as = alphas(f);
  const auto cfg = mfs_config(f, shape.domain.size());
  io::CsvTable t({"alpha", "index", "lambda", "multiplicity", "residual"});
  for (double a : as) {
    const auto res = mfs::eigenvalues(shape.domain, a, f.count, cfg);
    for (int i = 0; i < f.count; ++i) {
      const auto& e = res.eigenvalues[i];
      t.row({format_double(a), std::to_string(i + 1), format_double(e.lambda), std::to_string(e.multiplicity),
             format_double(e.residual)});
    }
  }
  emit(f, out, "eigs", t);
  return 0;
}

int cmd_optimize(const Flags& f, bool volume_given, std::ostream& out) {
  const auto shape = load_shape(f, volume_given);
  const auto as = alphas(f);
  if (as.size() != 1) throw UsageError("--alpha", "optimize takes a single value");
  const int n = single_n(f);
  auto ocfg = optim_config(f);
  ocfg.volume = shape.V;
  const auto mcfg = mfs_config(f, shape.domain.size());
  const auto res = optim::minimize(shape.domain, as[0], n, ocfg, mcfg);

  std::vector<std::string> header{"iter", "objective", "step", "active_count", "omega"};
  for (int i = 1; i <= n; ++i) header.push_back("lambda_" + std::to_string(i));
  io::CsvTable t(header);
  io::Series s{"objective", {}, {}};
  for (std::size_t k = 0; k < res.trace.iterates.size(); ++k) {
    const auto& it = res.trace.iterates[k];
    std::vector<std::string> row{std::to_string(k), format_double(it.objective), format_double(it.step),
                                 std::to_string(it.active_count), format_double(it.omega)};
    for (double l : it.lambda_values) row.push_back(format_double(l));
    t.row(row);
    s.x.push_back(static_cast<double>(k));
    s.y.push_back(it.objective);
  }
  emit(f, out, "optimize", t);
  const io::ShapeFile final_shape{shape.V, res.domain};
  if (!f.out.empty()) {
    io::write_json(fs::path(f.out) / "run.json", io::run_record(ocfg, mcfg, as[0], n, res));
    io::write_shape(fs::path(f.out) / "final_shape.json", final_shape);
  } else {
    out << io::shape_to_json(final_shape).dump() << "\n";
  }
  emit_svg(f, "optimize", {s}, "lambda_" + std::to_string(n) + " objective", "iteration", "objective");
  return 0;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  const int n = single_n(f);
  const auto as = alphas(f);
  const int maxc = f.max_components > 0 ? f.max_components : n;
  const auto parts = theory::partitions(n, maxc);
  auto ocfg = optim_config(f);
  ocfg.max_iters = f.iters;
  const auto mcfg = mfs_config(f, 1);
  const int harmonics = std::max(f.harmonics, 0);
  const theory::BallCatalog catalog(2);

  struct Row {
    std::vector<std::pair<std::string, std::pair<double, double>>> per;  // label, (lambda_n, catalog)
    int best = 0;
    double wk = 0.0;
  };
  std::vector<Row> rows(as.size());
  parallel_for(as.size(), [&](std::size_t i) {
    Row& r = rows[i];
    if (f.catalog_only) {
      for (const auto& p : parts) {
        const double l = catalog.for_partition(p, f.volume, as[i]).lambda;
        r.per.push_back({theory::partition_label(p), {l, l}});
      }
      for (std::size_t k = 0; k < r.per.size(); ++k) {
        if (r.per[k].second.first < r.per[r.best].second.first) r.best = static_cast<int>(k);
      }
      if (n >= 2) {
        std::vector<theory::StarEvaluator> ev;
        for (int k = 1; k < n; ++k) ev.push_back(catalog.evaluator(k));
        r.wk = theory::wolf_keller_combine(n, 2, f.volume, as[i], ev).value;
      }
    } else {
      const auto res = optim::topology_sweep(as[i], n, parts, ocfg, mcfg, harmonics);
      for (const auto& c : res.candidates) r.per.push_back({c.label, {c.lambda_n, c.seed_lambda}});
      r.best = res.best;
      r.wk = res.wolf_keller_lambda;
    }
  });

  io::CsvTable full({"alpha", "topology", "lambda_n", "catalog_lambda", "best"});
  io::CsvTable best({"alpha", "best_topology", "lambda_n", "wolf_keller_lambda"});
  std::map<std::string, io::Series> series;
  for (std::size_t i = 0; i < as.size(); ++i) {
    const auto& r = rows[i];
    for (std::size_t k = 0; k < r.per.size(); ++k) {
      const auto& [label, vals] = r.per[k];
      full.row({format_double(as[i]), label, format_double(vals.first), format_double(vals.second),
                b2s(static_cast<int>(k) == r.best)});
      auto& s = series[label];
      s.label = label;
      s.x.push_back(as[i]);
      s.y.push_back(vals.first);
    }
    best.row({format_double(as[i]), r.per[r.best].first, format_double(r.per[r.best].second.first),
              n >= 2 ? format_double(r.wk) : ""});
  }
  emit(f, out, "sweep_best", best);
  emit(f, out, "sweep", full, false);
  std::vector<io::Series> ss;
  for (auto& [k, s] : series) ss.push_back(s);
  emit_svg(f, "sweep", ss, "lambda_" + std::to_string(n) + " by topology", "alpha", "lambda_n");
  return 0;
}

int cmd_transition(const Flags& f, std::ostream& out) {
  std::vector<int> ns;
  if (f.n.empty()) {
    for (int n = f.dim + 1; n <= f.dim + 8; ++n) ns.push_back(n);
  } else {
    ns = parse_int_range("--n", f.n);
  }
  if (f.dim < 2) throw UsageError("--dim", "must be >= 2");
  for (int n : ns) {
    if (n < f.dim + 1) throw UsageError("--n", "values must be >= dim + 1");
  }
  io::CsvTable t({"n", "alpha_n", "alpha_n_over_n_pow_1_over_N", "gamma0", "C_N"});
  for (int n : ns) {
    const auto r = ball::transition_alpha(f.dim, n, f.volume);
    t.row({std::to_string(n), format_double(r.alpha_n), format_double(r.alpha_n / std::pow(n, 1.0 / f.dim)),
           format_double(r.gamma0), format_double(r.C_N)});
  }
  emit(f, out, "transition", t);
  return 0;
}

int cmd_wolf_keller(const Flags& f, std::ostream& out) {
  if (f.n.empty()) throw UsageError("--n", "required");
  const auto ns = parse_int_range("--n", f.n);
  for (int n : ns) {
    if (n < 2) throw UsageError("--n", "values must be >= 2");
  }
  const auto as = alphas(f);
  const theory::BallCatalog catalog(f.dim);
  const int nmax = *std::max_element(ns.begin(), ns.end());
  std::vector<theory::StarEvaluator> ev;
  for (int k = 1; k < nmax; ++k) ev.push_back(catalog.evaluator(k));

  struct Cell {
    theory::WKResult wk;
    theory::BallUnion best;
  };
  std::vector<Cell> cells(ns.size() * as.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const int n = ns[i / as.size()];
    const double a = as[i % as.size()];
    cells[i] = {theory::wolf_keller_combine(n, f.dim, f.volume, a, ev), catalog.best(n, f.volume, a)};
  });
  io::CsvTable t({"n", "alpha", "k", "xi1", "xi2", "value", "lambda_star", "catalog_lambda", "catalog_topology"});
  std::vector<io::Series> series;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int n = ns[i / as.size()];
    const double a = as[i % as.size()];
    const auto& c = cells[i];
    const double lam = std::pow(c.wk.value, 2.0 / f.dim);
    t.row({std::to_string(n), format_double(a), std::to_string(c.wk.k), format_double(c.wk.xi1),
           format_double(c.wk.xi2), format_double(c.wk.value), format_double(lam), format_double(c.best.lambda),
           c.best.label()});
    if (i % as.size() == 0) series.push_back({"n=" + std::to_string(n), {}, {}});
    series.back().x.push_back(a);
    series.back().y.push_back(lam);
  }
  emit(f, out, "wolf_keller", t);
  emit_svg(f, "wolf_keller", series, "Wolf-Keller combined values", "alpha", "lambda");
  return 0;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  const auto ns = f.n.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6} : parse_int_range("--n", f.n);
  for (int n : ns) {
    if (n < 1) throw UsageError("--n", "values must be >= 1");
  }
  const auto as = alphas(f, {0.5, 1, 2, 5, 10, 20, 50, 100});
  const bool est_ok = f.dim == 2 && f.volume == 1.0;
  if (f.fig_est && !est_ok) throw UsageError("--fig-est", "requires --dim 2 and --volume 1");
  const theory::BallCatalog catalog(f.dim);

  std::vector<std::vector<theory::BoundsReport>> cells(ns.size() * as.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const int n = ns[i / as.size()];
    const double a = as[i % as.size()];
    auto& rs = cells[i];
    const double ln = catalog.lambda_star(n, f.volume, a);
    const double ln1 = catalog.lambda_star(n + 1, f.volume, a);
    if (!f.fig_est) {
      rs.push_back(theory::n_ball_bound(f.dim, f.volume, a, n));
      rs.push_back(theory::gap_bound_comp(f.dim, f.volume, a, n, ln, ln1));
      rs.push_back(theory::gap_explicit_report(f.dim, f.volume, a, n, ln, ln1));
    }
    if (est_ok) rs.push_back(theory::fig_est_report(n, a, ln, ln1));
  });

  io::CsvTable t({"kind", "n", "alpha", "lhs", "rhs", "satisfied"});
  bool all = true;
  std::map<int, io::Series> est;
  for (const auto& rs : cells) {
    for (const auto& r : rs) {
      t.row({theory::to_string(r.kind), std::to_string(r.n), format_double(r.alpha), format_double(r.lhs),
             format_double(r.rhs), b2s(r.satisfied)});
      all = all && r.satisfied;
      if (r.kind == theory::BoundKind::fig_est) {
        auto& s = est[r.n];
        s.label = "n=" + std::to_string(r.n);
        s.x.push_back(r.alpha);
        s.y.push_back(r.lhs);
      }
    }
  }
  emit(f, out, "bounds", t);
  std::vector<io::Series> ss;
  for (auto& [k, s] : est) ss.push_back(s);
  if (!ss.empty()) emit_svg(f, "fig_est", ss, "gap verification quantity", "alpha", "quantity");
  return all ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robin eigenvalue optimisation on planar domains and ball unions", "robinopt"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* s) {
    s->add_option("--dim", f.dim, "Dimension N (default 2)");
    s->add_option("--volume", f.volume, "Total volume V (default 1)")->check(CLI::PositiveNumber);
    s->add_option("--out", f.out, "Output directory for CSV/JSON/SVG files");
    s->add_flag("--svg", f.svg, "Also write SVG plots (needs --out)");
  };
  auto alpha_opts = [&](CLI::App* s) {
    auto* a = s->add_option("--alpha", f.alpha, "Robin parameter, or a comma-separated list");
    auto* g = s->add_option("--alpha-grid", f.alpha_grid, "Grid a..b:step");
    a->excludes(g);
  };
  auto solver_opts = [&](CLI::App* s) {
    s->add_option("--np", f.np, "Collocation points per component")->check(CLI::PositiveNumber);
    s->add_option("--gamma", f.gamma, "Source offset as a fraction of the mean radius")->check(CLI::PositiveNumber);
    s->add_option("--seed", f.seed, "Seed for quasi-random interior points");
    s->add_option("--mfs-config", f.mfs_config, "Solver config JSON file");
  };

  auto* eigs = app.add_subcommand("eigs", "Lowest eigenvalues of a shape file");
  common(eigs);
  alpha_opts(eigs);
  solver_opts(eigs);
  eigs->add_option("--shape", f.shape, "Shape JSON file")->required();
  eigs->add_option("--count", f.count, "Number of eigenvalues");
  eigs->add_flag("--decouple", f.decouple, "Solve components separately");
  eigs->add_option("--harmonics", f.harmonics, "Pad components to this many harmonics");

  auto* opt = app.add_subcommand("optimize", "Minimise lambda_n from a starting shape");
  common(opt);
  alpha_opts(opt);
  solver_opts(opt);
  opt->add_option("--shape", f.shape, "Starting shape JSON file")->required();
  opt->add_option("--n", f.n, "Eigenvalue index")->required();
  opt->add_option("--max-iters", f.max_iters, "Iteration cap");
  opt->add_option("--harmonics", f.harmonics, "Pad components to this many harmonics");
  opt->add_option("--optim-config", f.optim_config, "Optimiser config JSON file");

  auto* sweep = app.add_subcommand("sweep-alpha", "Best topology for lambda_n across alpha");
  common(sweep);
  alpha_opts(sweep);
  solver_opts(sweep);
  sweep->add_option("--n", f.n, "Eigenvalue index")->required();
  sweep->add_option("--max-components", f.max_components, "Largest number of components (default n)");
  sweep->add_option("--iters", f.iters, "Descent iterations per topology (0: evaluate the seeds)");
  sweep->add_option("--harmonics", f.harmonics, "Harmonics per seeded component");
  sweep->add_flag("--catalog-only", f.catalog_only, "Use analytic ball-union values only");
  sweep->add_option("--optim-config", f.optim_config, "Optimiser config JSON file");

  auto* trans = app.add_subcommand("transition-table", "Transition values alpha_n for n equal balls");
  common(trans);
  trans->add_option("--n", f.n, "Index or range a..b (default N+1..N+8)");

  auto* wk = app.add_subcommand("wolf-keller", "Wolf-Keller combination over ball-union values");
  common(wk);
  alpha_opts(wk);
  wk->add_option("--n", f.n, "Index or range a..b")->required();

  auto* ver = app.add_subcommand("verify-bounds", "Check the n-ball and gap bounds on ball-union values");
  common(ver);
  alpha_opts(ver);
  ver->add_option("--n", f.n, "Index or range a..b (default 1..6)");
  ver->add_flag("--fig-est", f.fig_est, "Only the gap verification quantity (N = 2, V = 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (f.svg && f.out.empty()) throw UsageError("--svg", "requires --out");
    if (f.dim < 1) throw UsageError("--dim", "must be >= 1");
    const bool volume_given = [&] {
      for (auto* s : app.get_subcommands()) {
        if (s->count("--volume")) return true;
      }
      return false;
    }();
    if (eigs->parsed()) return cmd_eigs(f, volume_given, out);
    if (opt->parsed()) return cmd_optimize(f, volume_given, out);
    if (f.dim != 2 && (sweep->parsed())) throw UsageError("--dim", "sweep-alpha is planar only");
    if (sweep->parsed()) return cmd_sweep(f, out);
    if (trans->parsed()) return cmd_transition(f, out);
    if (wk->parsed()) return cmd_wolf_keller(f, out);
    if (ver->parsed()) return cmd_verify(f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace robinopt::cli

#include "robinopt/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace robinopt::io {

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected an object");
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw FormatError(std::string(what) + ": unknown key \"" + k + "\"");
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick spacing giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

json shape_to_json(const ShapeFile& shape) {
  json comps = json::array();
  for (const auto& c : shape.domain.components) {
    comps.push_back({{"center", {c.center[0], c.center[1]}}, {"a0", c.a0}, {"a", c.a}, {"b", c.b}});
  }
  return {{"V", shape.V}, {"components", comps}};
}

ShapeFile shape_from_json(const json& j) {
  reject_unknown(j, {"V", "components"}, "shape");
  if (!j.contains("components") || !j["components"].is_array()) throw FormatError("shape: missing \"components\" array");
  ShapeFile out;
  for (const auto& c : j["components"]) {
    reject_unknown(c, {"center", "a0", "a", "b"}, "shape component");
    geometry::ShapeFourier s;
    s.a.clear();
    s.b.clear();
    read_opt(c, "a0", s.a0);
    read_opt(c, "a", s.a);
    read_opt(c, "b", s.b);
    std::vector<double> center{0.0, 0.0};
    read_opt(c, "center", center);
    if (center.size() != 2) throw FormatError("shape component: center must have two entries");
    s.center = {center[0], center[1]};
    if (s.a.size() != s.b.size()) throw FormatError("shape component: \"a\" and \"b\" lengths differ");
    out.domain.components.push_back(std::move(s));
  }
  if (out.domain.components.empty()) throw FormatError("shape: no components");
  if (j.contains("V")) {
    read_opt(j, "V", out.V);
  } else {
    out.V = out.domain.total_area();
  }
  return out;
}

ShapeFile read_shape(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return shape_from_json(j);
}

void write_shape(const std::filesystem::path& path, const ShapeFile& shape) { write_json(path, shape_to_json(shape)); }

json to_json(const mfs::MfsConfig& c) {
  return {{"np_per_component", c.np_per_component},
          {"gamma", c.gamma},
          {"lambda_min", c.lambda_min},
          {"lambda_max", c.lambda_max},
          {"scan_step", c.scan_step},
          {"scan_points", c.scan_points},
          {"scan_np_fraction", c.scan_np_fraction},
          {"refine_tol", c.refine_tol},
          {"singularity_threshold", c.singularity_threshold},
          {"multiplicity_factor", c.multiplicity_factor},
          {"multiplicity_floor", c.multiplicity_floor},
          {"cluster_probe", c.cluster_probe},
          {"interior_fraction", c.interior_fraction},
          {"decouple_components", c.decouple_components},
          {"seed", c.seed}};
}

mfs::MfsConfig mfs_config_from_json(const json& j) {
  reject_unknown(j,
                 {"np_per_component", "gamma", "lambda_min", "lambda_max", "scan_step", "scan_points",
                  "scan_np_fraction", "refine_tol", "singularity_threshold", "multiplicity_factor",
                  "multiplicity_floor", "cluster_probe", "interior_fraction", "decouple_components", "seed"},
                 "mfs config");
  mfs::MfsConfig c;
  read_opt(j, "np_per_component", c.np_per_component);
  read_opt(j, "gamma", c.gamma);
  read_opt(j, "lambda_min", c.lambda_min);
  read_opt(j, "lambda_max", c.lambda_max);
  read_opt(j, "scan_step", c.scan_step);
  read_opt(j, "scan_points", c.scan_points);
  read_opt(j, "scan_np_fraction", c.scan_np_fraction);
  read_opt(j, "refine_tol", c.refine_tol);
  read_opt(j, "singularity_threshold", c.singularity_threshold);
  read_opt(j, "multiplicity_factor", c.multiplicity_factor);
  read_opt(j, "multiplicity_floor", c.multiplicity_floor);
  read_opt(j, "cluster_probe", c.cluster_probe);
  read_opt(j, "interior_fraction", c.interior_fraction);
  read_opt(j, "decouple_components", c.decouple_components);
  read_opt(j, "seed", c.seed);
  c.validate();
  return c;
}

json to_json(const optim::OptimConfig& c) {
  return {{"volume", c.volume},
          {"fd_step", c.fd_step},
          {"cluster_threshold", c.cluster_threshold},
          {"omega0", c.omega0},
          {"omega_ratio", c.omega_ratio},
          {"omega_advance_every", c.omega_advance_every},
          {"max_iters", c.max_iters},
          {"line_search_tol", c.line_search_tol},
          {"stall_tol", c.stall_tol},
          {"stall_window", c.stall_window},
          {"x_max", c.x_max}};
}

optim::OptimConfig optim_config_from_json(const json& j) {
  reject_unknown(j,
                 {"volume", "fd_step", "cluster_threshold", "omega0", "omega_ratio", "omega_advance_every",
                  "max_iters", "line_search_tol", "stall_tol", "stall_window", "x_max"},
                 "optim config");
  optim::OptimConfig c;
  read_opt(j, "volume", c.volume);
  read_opt(j, "fd_step", c.fd_step);
  read_opt(j, "cluster_threshold", c.cluster_threshold);
  read_opt(j, "omega0", c.omega0);
  read_opt(j, "omega_ratio", c.omega_ratio);
  read_opt(j, "omega_advance_every", c.omega_advance_every);
  read_opt(j, "max_iters", c.max_iters);
  read_opt(j, "line_search_tol", c.line_search_tol);
  read_opt(j, "stall_tol", c.stall_tol);
  read_opt(j, "stall_window", c.stall_window);
  read_opt(j, "x_max", c.x_max);
  c.validate();
  return c;
}

json run_record(const optim::OptimConfig& ocfg, const mfs::MfsConfig& mcfg, double alpha, int n,
                const optim::MinimizeResult& result) {
  json iters = json::array();
  for (std::size_t i = 0; i < result.trace.iterates.size(); ++i) {
    const auto& it = result.trace.iterates[i];
    iters.push_back({{"iter", i},
                     {"objective", it.objective},
                     {"step", it.step},
                     {"lambdas", it.lambda_values},
                     {"active_count", it.active_count},
                     {"omega", it.omega},
                     {"coeffs", it.coeffs}});
  }
  json eigs = json::array();
  for (const auto& e : result.trace.final_eigs) {
    eigs.push_back({{"lambda", e.lambda}, {"multiplicity", e.multiplicity}, {"residual", e.residual}});
  }
  return {{"alpha", alpha},
          {"n", n},
          {"optim_config", to_json(ocfg)},
          {"mfs_config", to_json(mcfg)},
          {"iterations", iters},
          {"stop_reason", result.trace.stop_reason},
          {"final_shape", shape_to_json({ocfg.volume, result.domain})},
          {"final_eigenvalues", eigs}};
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("csv: row width does not match header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

std::string svg_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel) {
  constexpr double W = 640, H = 440, L = 70, R = 160, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs = nice_step(x1 - x0, 6), ys = nice_step(y1 - y0, 6);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << T + ph << "\" x2=\"" << px(t) << "\" y2=\"" << T + ph + 5
       << "\" stroke=\"black\"/><text x=\"" << px(t) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">"
       << format_double(std::round(t / xs) * xs) << "</text>\n";
  }
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << L << "\" y2=\"" << py(t)
       << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">"
       << format_double(std::round(t / ys) * ys) << "</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xml_escape(xlabel)
     << "</text>\n";
  os << "<text transform=\"translate(16," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << xml_escape(ylabel) << "</text>\n";

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colors[k % 7];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    const double ly = T + 16 + 18 * k;
    os << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << L + pw + 32 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << col << "\" stroke-width=\"2\"/><text x=\"" << L + pw + 38 << "\" y=\"" << ly << "\">"
       << xml_escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace robinopt::io

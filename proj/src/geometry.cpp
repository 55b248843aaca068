#include "robinopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace robinopt::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RadialSample {
  double r;
  double dr;
};

// r and r' at theta_j = 2 pi j / n, using rotating phasors instead of
// one cos/sin pair per harmonic.
std::vector<RadialSample> sample_radius(const ShapeFourier& s, int n) {
  std::vector<RadialSample> out(n);
  const int M = s.harmonics();
  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * j / n;
    const std::complex<double> step = std::polar(1.0, theta);
    std::complex<double> ph = 1.0;
    double r = s.a0, dr = 0.0;
    for (int i = 1; i <= M; ++i) {
      ph *= step;
      const double c = ph.real(), sn = ph.imag();
      r += s.a[i - 1] * c + s.b[i - 1] * sn;
      dr += i * (s.b[i - 1] * c - s.a[i - 1] * sn);
    }
    out[j] = {r, dr};
  }
  return out;
}

}  // namespace

ShapeFourier ShapeFourier::disk(double radius, Point center) {
  ShapeFourier s;
  s.a0 = radius;
  s.center = center;
  return s;
}

double ShapeFourier::radius(double theta) const {
  double r = a0;
  for (int i = 1; i <= harmonics(); ++i) r += a[i - 1] * std::cos(i * theta) + b[i - 1] * std::sin(i * theta);
  return r;
}

double ShapeFourier::radius_derivative(double theta) const {
  double dr = 0.0;
  for (int i = 1; i <= harmonics(); ++i) dr += i * (b[i - 1] * std::cos(i * theta) - a[i - 1] * std::sin(i * theta));
  return dr;
}

double ShapeFourier::max_radius() const {
  const auto s = sample_radius(*this, kPositivityGrid);
  return std::max_element(s.begin(), s.end(), [](auto x, auto y) { return x.r < y.r; })->r;
}

double ShapeFourier::min_radius() const {
  const auto s = sample_radius(*this, kPositivityGrid);
  return std::min_element(s.begin(), s.end(), [](auto x, auto y) { return x.r < y.r; })->r;
}

void ShapeFourier::validate() const {
  if (a.size() != b.size()) throw InvalidShape("shape: cosine and sine coefficient counts differ");
  if (!std::isfinite(a0)) throw InvalidShape("shape: non-finite coefficient");
  for (const auto& smp : sample_radius(*this, kPositivityGrid)) {
    if (!(smp.r > 0.0)) throw InvalidShape("shape: radius is not positive on the check grid");
  }
}

bool ShapeFourier::contains(const Point& p) const {
  const double dx = p[0] - center[0], dy = p[1] - center[1];
  const double rho = std::hypot(dx, dy);
  if (rho == 0.0) return true;
  return rho < radius(std::atan2(dy, dx));
}

ShapeFourier ShapeFourier::scaled(double s) const {
  ShapeFourier out = *this;
  out.a0 *= s;
  for (auto& v : out.a) v *= s;
  for (auto& v : out.b) v *= s;
  out.center = {center[0] * s, center[1] * s};
  return out;
}

double area(const ShapeFourier& shape) {
  shape.validate();
  double sum = 0.0;
  for (int i = 0; i < shape.harmonics(); ++i) sum += shape.a[i] * shape.a[i] + shape.b[i] * shape.b[i];
  return std::numbers::pi * shape.a0 * shape.a0 + 0.5 * std::numbers::pi * sum;
}

double perimeter(const ShapeFourier& shape) {
  shape.validate();
  const int n = std::max(kPositivityGrid, 256 * (shape.harmonics() + 1));
  double sum = 0.0;
  for (const auto& s : sample_radius(shape, n)) sum += std::hypot(s.r, s.dr);
  return sum * kTwoPi / n;
}

MultiDomain::MultiDomain(std::vector<ShapeFourier> comps) : components(std::move(comps)) {}

void MultiDomain::validate() const {
  if (components.empty()) throw InvalidShape("domain: no components");
  std::vector<double> rmax;
  for (const auto& c : components) {
    c.validate();
    rmax.push_back(c.max_radius());
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      const auto& ci = components[i].center;
      const auto& cj = components[j].center;
      if (!(std::hypot(ci[0] - cj[0], ci[1] - cj[1]) > rmax[i] + rmax[j])) {
        throw InvalidShape("domain: components " + std::to_string(i) + " and " + std::to_string(j) +
                           " are not separated");
      }
    }
  }
}

double MultiDomain::total_area() const {
  double s = 0.0;
  for (const auto& c : components) s += area(c);
  return s;
}

bool MultiDomain::contains(const Point& p) const {
  return std::any_of(components.begin(), components.end(), [&](const auto& c) { return c.contains(p); });
}

MultiDomain normalize_area(const MultiDomain& domain, double V) {
  const double total = domain.total_area();
  if (!(total > 0.0) || !(V > 0.0)) throw InvalidShape("normalize_area: areas must be positive");
  const double s = std::sqrt(V / total);
  MultiDomain out;
  out.components.reserve(domain.size());
  for (const auto& c : domain.components) out.components.push_back(c.scaled(s));
  return out;
}

std::vector<BoundaryPoint> boundary_points(const MultiDomain& domain, std::span<const int> np_per_component) {
  if (np_per_component.size() != domain.size()) {
    throw std::invalid_argument("boundary_points: one point count per component required");
  }
  std::vector<BoundaryPoint> pts;
  for (std::size_t c = 0; c < domain.size(); ++c) {
    const auto& shape = domain.components[c];
    shape.validate();
    const int np = np_per_component[c];
    if (np < 1) throw std::invalid_argument("boundary_points: point count must be positive");
    const double dtheta = kTwoPi / np;
    const auto samples = sample_radius(shape, np);
    for (int j = 0; j < np; ++j) {
      const double theta = dtheta * j;
      const double ct = std::cos(theta), st = std::sin(theta);
      const auto [r, dr] = samples[j];
      const double tx = dr * ct - r * st;
      const double ty = dr * st + r * ct;
      const double tn = std::hypot(tx, ty);
      BoundaryPoint bp;
      bp.x = {shape.center[0] + r * ct, shape.center[1] + r * st};
      // Tangent rotated by -90 degrees points outward for counter-clockwise parametrisation.
      bp.normal = {ty / tn, -tx / tn};
      bp.arc_weight = tn * dtheta;
      bp.component = static_cast<int>(c);
      pts.push_back(bp);
    }
  }
  return pts;
}

std::vector<Point> source_points(const MultiDomain& domain, std::span<const BoundaryPoint> boundary,
                                 std::span<const double> gamma_per_component) {
  std::vector<Point> out;
  out.reserve(boundary.size());
  for (const auto& bp : boundary) {
    const double g = gamma_per_component[bp.component];
    if (!(g > 0.0)) throw InvalidShape("source_points: gamma must be > 0");
    const Point y{bp.x[0] + g * bp.normal[0], bp.x[1] + g * bp.normal[1]};
    for (const auto& c : domain.components) {
      const double dx = y[0] - c.center[0], dy = y[1] - c.center[1];
      if (!(std::hypot(dx, dy) > c.radius(std::atan2(dy, dx)))) {
        throw InvalidShape("source_points: source point inside the domain");
      }
    }
    out.push_back(y);
  }
  return out;
}

std::vector<Point> source_points(const MultiDomain& domain, std::span<const BoundaryPoint> boundary, double gamma) {
  const std::vector<double> g(domain.size(), gamma);
  return source_points(domain, boundary, g);
}

}  // namespace robinopt::geometry

#pragma once

// Star-shaped planar components with a truncated Fourier radius, and
// disjoint unions of them.

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace robinopt::geometry {

using Point = std::array<double, 2>;

class InvalidShape : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// r(theta) = a0 + sum_i a_i cos(i theta) + b_i sin(i theta), placed at `center`.
struct ShapeFourier {
  double a0 = 1.0;
  std::vector<double> a;
  std::vector<double> b;
  Point center{0.0, 0.0};

  static ShapeFourier disk(double radius, Point center = {0.0, 0.0});

  int harmonics() const { return static_cast<int>(a.size()); }
  double radius(double theta) const;
  double radius_derivative(double theta) const;
  /// Largest / smallest radius on the positivity check grid.
  double max_radius() const;
  double min_radius() const;
  /// Mean radius, i.e. a0.
  double mean_radius() const { return a0; }
  /// Throws InvalidShape if r <= 0 somewhere on the check grid or a/b differ in length.
  void validate() const;
  /// Polar test of a point against this component: |p - c| < r(theta_p).
  bool contains(const Point& p) const;
  ShapeFourier scaled(double s) const;
};

inline constexpr int kPositivityGrid = 4096;

double area(const ShapeFourier& shape);
double perimeter(const ShapeFourier& shape);

struct MultiDomain {
  std::vector<ShapeFourier> components;

  MultiDomain() = default;
  explicit MultiDomain(std::vector<ShapeFourier> comps);

  /// Throws InvalidShape on an invalid component or on overlapping bounding disks.
  void validate() const;
  double total_area() const;
  bool contains(const Point& p) const;
  std::size_t size() const { return components.size(); }
};

/// Uniformly rescales coefficients and centers so that the total area is V.
MultiDomain normalize_area(const MultiDomain& domain, double V);

struct BoundaryPoint {
  Point x;
  Point normal;
  double arc_weight;
  int component;
};

/// Collocation points at uniformly spaced polar angles on each component.
std::vector<BoundaryPoint> boundary_points(const MultiDomain& domain, std::span<const int> np_per_component);

/// y_i = x_i + gamma_i n_i. A single gamma applies to every point; the
/// per-component overload scales the offset component by component. Throws
/// InvalidShape if a source lands inside the closed domain.
std::vector<Point> source_points(const MultiDomain& domain, std::span<const BoundaryPoint> boundary, double gamma);
std::vector<Point> source_points(const MultiDomain& domain, std::span<const BoundaryPoint> boundary,
                                 std::span<const double> gamma_per_component);

}  // namespace robinopt::geometry

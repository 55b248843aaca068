#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "robinopt/geometry.hpp"

using namespace robinopt::geometry;

namespace {

ShapeFourier random_shape(std::mt19937& rng, int M, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  ShapeFourier s;
  s.a0 = 1.0;
  for (int i = 0; i < M; ++i) {
    s.a.push_back(u(rng) / (i + 1));
    s.b.push_back(u(rng) / (i + 1));
  }
  return s;
}

double quad_area(const ShapeFourier& s) {
  return 0.5 * oracle::periodic_trapezoid([&](double t) { return s.radius(t) * s.radius(t); });
}

double quad_perimeter(const ShapeFourier& s) {
  // radius and derivative summed directly, not through the library
  auto r = [&](double t, double& dr) {
    double v = s.a0;
    dr = 0.0;
    for (int i = 0; i < s.harmonics(); ++i) {
      const double k = i + 1;
      v += s.a[i] * std::cos(k * t) + s.b[i] * std::sin(k * t);
      dr += k * (-s.a[i] * std::sin(k * t) + s.b[i] * std::cos(k * t));
    }
    return v;
  };
  return oracle::periodic_trapezoid([&](double t) {
    double dr;
    const double v = r(t, dr);
    return std::hypot(v, dr);
  });
}

}  // namespace

TEST_CASE("area closed form") {
  CHECK(area(ShapeFourier::disk(1.0)) == doctest::Approx(oracle::pi).epsilon(1e-15));
  ShapeFourier s;
  s.a = {0.0, 0.1};
  s.b = {0.0, 0.0};
  CHECK(area(s) == doctest::Approx(oracle::pi + oracle::pi / 2 * 0.01).epsilon(1e-15));
}

TEST_CASE("area and perimeter against quadrature") {
  std::mt19937 rng(7);
  for (int M : {1, 4, 10, 20}) {
    const auto s = random_shape(rng, M, 0.15);
    CAPTURE(M);
    CHECK(std::abs(area(s) - quad_area(s)) <= 1e-9);
    CHECK(perimeter(s) == doctest::Approx(quad_perimeter(s)).epsilon(1e-8));
  }
  ShapeFourier e;
  e.a = {0.0, 0.2};
  e.b = {0.0, 0.0};
  CHECK(std::abs(perimeter(e) - quad_perimeter(e)) <= 1e-7);
  CHECK(perimeter(ShapeFourier::disk(1.0)) == doctest::Approx(2 * oracle::pi).epsilon(1e-12));
  CHECK(perimeter(ShapeFourier::disk(2.0)) == doctest::Approx(4 * oracle::pi).epsilon(1e-12));
}

TEST_CASE("invalid shapes") {
  ShapeFourier s;
  s.a = {1.5};
  s.b = {0.0};
  CHECK_THROWS_AS(s.validate(), InvalidShape);
  CHECK_THROWS_AS(area(s), InvalidShape);
  CHECK_THROWS_AS(perimeter(s), InvalidShape);
  ShapeFourier t;
  t.a = {0.1};
  CHECK_THROWS_AS(t.validate(), InvalidShape);
  MultiDomain overlap({ShapeFourier::disk(1.0, {0, 0}), ShapeFourier::disk(1.0, {1.5, 0})});
  CHECK_THROWS_AS(overlap.validate(), InvalidShape);
  MultiDomain apart({ShapeFourier::disk(1.0, {0, 0}), ShapeFourier::disk(1.0, {2.5, 0})});
  CHECK_NOTHROW(apart.validate());
  CHECK(apart.total_area() == doctest::Approx(2 * oracle::pi));
}

TEST_CASE("normalize_area examples") {
  const auto d = normalize_area(MultiDomain({ShapeFourier::disk(2.0)}), oracle::pi);
  CHECK(d.components[0].a0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(d.total_area() - oracle::pi) <= 1e-12);

  MultiDomain unit({ShapeFourier::disk(std::sqrt(1.0 / oracle::pi))});
  const auto same = normalize_area(unit, 1.0);
  CHECK(same.components[0].a0 == doctest::Approx(unit.components[0].a0).epsilon(1e-15));

  const double r = std::sqrt(0.6 / oracle::pi);
  MultiDomain two({ShapeFourier::disk(r, {0, 0}), ShapeFourier::disk(r, {3, 1})});
  const auto half = normalize_area(two, 1.0);
  CHECK(std::abs(area(half.components[0]) - 0.5) <= 1e-12);
  CHECK(std::abs(area(half.components[1]) - 0.5) <= 1e-12);
  const double s = std::sqrt(1.0 / 1.2);
  CHECK(half.components[1].center[0] == doctest::Approx(3 * s).epsilon(1e-14));
  CHECK(half.components[1].center[1] == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("boundary_points examples") {
  MultiDomain disk({ShapeFourier::disk(1.0)});
  const std::vector<int> np{4};
  const auto pts = boundary_points(disk, np);
  REQUIRE(pts.size() == 4);
  const double expect[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(pts[i].x[0] == doctest::Approx(expect[i][0]).epsilon(1e-15));
    CHECK(pts[i].x[1] == doctest::Approx(expect[i][1]).epsilon(1e-15));
    CHECK(std::abs(pts[i].normal[0] - expect[i][0]) <= 1e-15);
    CHECK(std::abs(pts[i].normal[1] - expect[i][1]) <= 1e-15);
  }

  std::mt19937 rng(3);
  const auto s = random_shape(rng, 5, 0.2);
  const std::vector<int> big{1024};
  const auto fine = boundary_points(MultiDomain({s}), big);
  double total = 0.0;
  for (const auto& p : fine) total += p.arc_weight;
  CHECK(total == doctest::Approx(perimeter(s)).epsilon(1e-6));

  MultiDomain shifted({ShapeFourier::disk(0.7, {2.0, -1.0})});
  const std::vector<int> n64{64};
  for (const auto& p : boundary_points(shifted, n64)) {
    const double dx = p.x[0] - 2.0, dy = p.x[1] + 1.0;
    const double len = std::hypot(dx, dy);
    CHECK(std::abs(p.normal[0] - dx / len) <= 1e-12);
    CHECK(std::abs(p.normal[1] - dy / len) <= 1e-12);
  }
}

TEST_CASE("normals are unit and outward") {
  std::mt19937 rng(11);
  const auto s = random_shape(rng, 6, 0.15);
  const std::vector<int> np{200};
  for (const auto& p : boundary_points(MultiDomain({s}), np)) {
    CHECK(std::abs(std::hypot(p.normal[0], p.normal[1]) - 1.0) <= 1e-12);
    const Point out{p.x[0] + 1e-6 * p.normal[0], p.x[1] + 1e-6 * p.normal[1]};
    const Point in{p.x[0] - 1e-6 * p.normal[0], p.x[1] - 1e-6 * p.normal[1]};
    CHECK_FALSE(s.contains(out));
    CHECK(s.contains(in));
  }
}

TEST_CASE("source_points examples") {
  MultiDomain disk({ShapeFourier::disk(1.0)});
  const std::vector<int> np{32};
  const auto bp = boundary_points(disk, np);
  for (const auto& y : source_points(disk, bp, 0.5)) CHECK(std::hypot(y[0], y[1]) == doctest::Approx(1.5));
  CHECK_THROWS(source_points(disk, bp, 0.0));

  ShapeFourier star;
  star.a = {0.0, 0.0, 0.3};
  star.b = {0.0, 0.0, 0.0};
  MultiDomain sd({star});
  const std::vector<int> n128{128};
  const auto sbp = boundary_points(sd, n128);
  const auto ys = source_points(sd, sbp, 0.02);
  for (const auto& y : ys) {
    const double th = std::atan2(y[1], y[0]);
    CHECK(star.radius(th) < std::hypot(y[0], y[1]));
  }
}

TEST_CASE("property: scaling and idempotence") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_shape(rng, 4, 0.2);
    for (double f : {0.3, 1.7, 4.0}) CHECK(area(s.scaled(f)) == doctest::Approx(f * f * area(s)).epsilon(1e-14));
    MultiDomain d({s, random_shape(rng, 3, 0.2)});
    d.components[1].center = {5.0, 0.5};
    const auto once = normalize_area(d, 2.0);
    const auto twice = normalize_area(once, 2.0);
    CHECK(std::abs(once.total_area() - 2.0) <= 1e-12);
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(twice.components[c].a0 == doctest::Approx(once.components[c].a0).epsilon(1e-14));
      for (int i = 0; i < once.components[c].harmonics(); ++i)
        CHECK(twice.components[c].a[i] == doctest::Approx(once.components[c].a[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("property: rotation leaves area and perimeter unchanged") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_shape(rng, 6, 0.2);
    for (double phi : {0.3, 1.1, 2.9}) {
      ShapeFourier r = s;
      for (int i = 0; i < s.harmonics(); ++i) {
        const double c = std::cos((i + 1) * phi), sn = std::sin((i + 1) * phi);
        r.a[i] = s.a[i] * c - s.b[i] * sn;
        r.b[i] = s.a[i] * sn + s.b[i] * c;
      }
      CHECK(std::abs(area(r) - area(s)) <= 1e-10);
      CHECK(std::abs(perimeter(r) - perimeter(s)) <= 1e-10);
    }
  }
}

TEST_CASE("property: isoperimetric inequality") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_shape(rng, 1 + trial % 8, 0.15);
    const double P = perimeter(s), A = area(s);
    CHECK(P * P / (4 * oracle::pi * A) >= 1.0 - 1e-10);
  }
}

#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "robinopt/ball.hpp"
#include "robinopt/geometry.hpp"
#include "robinopt/mfs.hpp"
#include "robinopt/specfun.hpp"

using namespace robinopt;
using geometry::MultiDomain;
using geometry::ShapeFourier;

namespace {

const double kUnitR = std::sqrt(1.0 / oracle::pi);

MultiDomain unit_disk() { return MultiDomain({ShapeFourier::disk(kUnitR)}); }

ShapeFourier fixed_shape() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  ShapeFourier s;
  s.a0 = kUnitR;
  for (int i = 0; i < 4; ++i) {
    s.a.push_back(u(rng) * kUnitR);
    s.b.push_back(u(rng) * kUnitR);
  }
  return s;
}

double lambda1(const MultiDomain& d, double alpha, const mfs::MfsConfig& cfg = {}) {
  return mfs::eigenvalues(d, alpha, 1, cfg).eigenvalues.at(0).lambda;
}

double disk_ball(double r, double alpha, int n) { return ball::ball_lambda_k({2, r}, alpha, n); }

}  // namespace

TEST_CASE("assemble: 1x1 closed form") {
  mfs::Discretization disc;
  const geometry::Point x{0.3, -0.2}, nrm{0.6, 0.8}, y{1.1, 0.4};
  disc.boundary.push_back({x, nrm, 0.1, 0});
  disc.sources.push_back(y);
  const double alpha = 2.5, lambda = 7.0;
  const auto A = mfs::assemble(disc, alpha, lambda);
  REQUIRE(A.rows() == 1);
  REQUIRE(A.cols() == 1);
  const double dx = x[0] - y[0], dy = x[1] - y[1], d = std::hypot(dx, dy), k = std::sqrt(lambda);
  const std::complex<double> I(0.0, 1.0);
  const std::complex<double> h0(oracle::bessel_j_series(0, k * d), specfun::bessel_y(0, k * d));
  const std::complex<double> h1(oracle::bessel_j_series(1, k * d), specfun::bessel_y(1, k * d));
  const auto expect = I / 4.0 * (-k * h1 * (dx * nrm[0] + dy * nrm[1]) / d + alpha * h0);
  CHECK(std::abs(A(0, 0) - expect) <= 1e-12 * std::abs(expect));
}

TEST_CASE("assemble: disk matrix is circulant") {
  mfs::MfsConfig cfg;
  cfg.np_per_component = {40};
  const auto A = mfs::assemble(unit_disk(), 1.0, 20.0, cfg);
  const int n = static_cast<int>(A.rows());
  REQUIRE(n == 40);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(A((i + 1) % n, (j + 1) % n) - A(i, j)));
  CHECK(worst <= 1e-10 * A.cwiseAbs().maxCoeff());
}

TEST_CASE("singularity_measure examples") {
  CHECK(mfs::singularity_measure(Eigen::MatrixXcd::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-14));
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Random(3, 3);
  z.col(1).setZero();
  CHECK(mfs::singularity_measure(z) == 0.0);
  Eigen::MatrixXcd r(2, 2);
  r << 1, 0, 1, 0;
  CHECK(mfs::singularity_measure(r) <= 1e-15);
}

TEST_CASE("measure dips at the disk eigenvalue") {
  const double l1 = disk_ball(kUnitR, 1.0, 1);
  const auto disc = mfs::Discretization::build(unit_disk(), mfs::MfsConfig{});
  const double at = mfs::subspace_measure(disc, 1.0, l1)(0);
  CHECK(at < mfs::subspace_measure(disc, 1.0, l1 - 0.5)(0));
  CHECK(at < mfs::subspace_measure(disc, 1.0, l1 + 0.5)(0));
  const double s = mfs::singularity_measure(mfs::assemble(disc, 1.0, l1));
  CHECK(s < mfs::singularity_measure(mfs::assemble(disc, 1.0, l1 - 0.5)));
  CHECK(s < mfs::singularity_measure(mfs::assemble(disc, 1.0, l1 + 0.5)));
}

TEST_CASE("unit-area disk against the ball oracle") {
  for (double alpha : {1.0, 10.0}) {
    const auto res = mfs::eigenvalues(unit_disk(), alpha, 3);
    REQUIRE(res.eigenvalues.size() == 3);
    CAPTURE(alpha);
    CHECK(std::abs(res.eigenvalues[0].lambda / disk_ball(kUnitR, alpha, 1) - 1.0) <= 1e-6);
    CHECK(std::abs(res.eigenvalues[2].lambda / disk_ball(kUnitR, alpha, 3) - 1.0) <= 1e-5);
    CHECK(res.eigenvalues[1].multiplicity == 2);
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i) {
      CHECK(res.eigenvalues[i].residual <= mfs::MfsConfig{}.singularity_threshold);
      if (i) CHECK(res.eigenvalues[i - 1].lambda <= res.eigenvalues[i].lambda);
    }
  }
  CHECK(lambda1(unit_disk(), 1.0) == doctest::Approx(oracle::disk_lambda1(kUnitR, 1.0)).epsilon(1e-6));
}

TEST_CASE("two equal disks report a double eigenvalue") {
  const double r = std::sqrt(0.5 / oracle::pi);
  MultiDomain b2({ShapeFourier::disk(r, {0, 0}), ShapeFourier::disk(r, {3 * r, 0})});
  const auto res = mfs::eigenvalues(b2, 1.0, 2);
  REQUIRE(res.eigenvalues.size() == 2);
  const double expect = disk_ball(r, 1.0, 1);
  CHECK(res.eigenvalues[0].lambda == doctest::Approx(expect).epsilon(1e-6));
  CHECK(res.eigenvalues[1].lambda == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("validate_against_ball examples") {
  CHECK(mfs::validate_against_ball(1.0, 1.0, 1) <= 1e-6);
  CHECK(mfs::validate_against_ball(1.0, 10.0, 3) <= 1e-5);
  const double j01 = specfun::bessel_j_zero(0, 1);
  const double stiff = lambda1(MultiDomain({ShapeFourier::disk(1.0)}), 1e6);
  CHECK(std::abs(stiff / (j01 * j01) - 1.0) <= 1e-3);
}

TEST_CASE("too narrow a window throws") {
  mfs::MfsConfig cfg;
  cfg.lambda_min = 1.0;
  cfg.lambda_max = 2.0;
  CHECK_THROWS_AS(mfs::eigenvalues(unit_disk(), 1.0, 1, cfg), mfs::NotEnoughEigenvalues);
}

TEST_CASE("results are deterministic") {
  const MultiDomain d({fixed_shape()});
  const auto a = mfs::eigenvalues(d, 2.0, 2);
  const auto b = mfs::eigenvalues(d, 2.0, 2);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) CHECK(a.eigenvalues[i].lambda == b.eigenvalues[i].lambda);
}

TEST_CASE("property: scaling law at solver level") {
  const auto s = fixed_shape();
  const double base = lambda1(MultiDomain({s}), 1.0);
  for (double t : {0.5, 2.0}) {
    const double scaled = t * t * lambda1(MultiDomain({s.scaled(t)}), 1.0 / t);
    CAPTURE(t);
    CHECK(std::abs(scaled - base) <= 1e-5 * base);
  }
}

TEST_CASE("property: lambda_1 increases with alpha") {
  const MultiDomain d({fixed_shape()});
  double prev = 0.0;
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    const double l = lambda1(d, a);
    CHECK(l > prev);
    prev = l;
  }
}

TEST_CASE("property: Neumann slope is perimeter over area") {
  for (const auto& s : {ShapeFourier::disk(kUnitR), fixed_shape()}) {
    const MultiDomain d({s});
    const double h = 1e-3;
    const double slope = (lambda1(d, h) - lambda1(d, 1e-9)) / h;
    const double geo = geometry::perimeter(s) / geometry::area(s);
    CHECK(std::abs(slope / geo - 1.0) <= 0.02);
  }
}

TEST_CASE("property: separated components decouple") {
  auto s = fixed_shape().scaled(0.8);
  s.center = {0.0, 0.0};
  auto t = ShapeFourier::disk(0.45);
  t.center = {2.0, 0.3};
  const MultiDomain both({s, t});
  mfs::MfsConfig coupled;
  const auto joint = mfs::eigenvalues(both, 1.0, 4, coupled);
  std::vector<double> singles;
  for (const auto& c : both.components)
    for (const auto& e : mfs::eigenvalues(MultiDomain({c}), 1.0, 4).eigenvalues) singles.push_back(e.lambda);
  for (const auto& e : joint.eigenvalues) {
    double best = 1e300;
    for (double v : singles) best = std::min(best, std::abs(v / e.lambda - 1.0));
    CAPTURE(e.lambda);
    CHECK(best <= 1e-6);
  }
  mfs::MfsConfig split;
  split.decouple_components = true;
  const auto parts = mfs::eigenvalues(both, 1.0, 4, split);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(parts.eigenvalues[i].lambda == doctest::Approx(joint.eigenvalues[i].lambda).epsilon(1e-6));
}

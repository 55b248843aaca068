#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "robinopt/ball.hpp"
#include "robinopt/geometry.hpp"
#include "robinopt/optim.hpp"

using namespace robinopt;
using geometry::MultiDomain;
using geometry::ShapeFourier;

namespace {

const double kUnitR = std::sqrt(1.0 / oracle::pi);

ShapeFourier wobbly() {
  ShapeFourier s;
  s.a0 = kUnitR;
  s.a = {0.06 * kUnitR, -0.05 * kUnitR};
  s.b = {0.04 * kUnitR, 0.07 * kUnitR};
  return s;
}

}  // namespace

TEST_CASE("clustered_objective examples") {
  const std::vector<double> l{1.0, 2.0, 3.0};
  CHECK(optim::clustered_objective(l, 2, 0, {}) == 2.0);
  const std::vector<double> w{0.5};
  CHECK(optim::clustered_objective(l, 2, 1, w) == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<double> c{1.0, 1.05, 3.0};
  const std::vector<double> w1{0.1};
  CHECK(optim::clustered_objective(c, 2, 1, w1) == doctest::Approx(1.05 - 0.1 * std::log(0.05)).epsilon(1e-14));
  const std::vector<double> flat{1.0, 1.0, 3.0};
  CHECK_THROWS(optim::clustered_objective(flat, 2, 1, w1));
  // two terms: lambda_3 - w1 log(l3 - l2) - w2 log(l2 - l1)
  const std::vector<double> l4{1.0, 1.2, 1.5, 4.0};
  const std::vector<double> w2{0.3, 0.2};
  CHECK(optim::clustered_objective(l4, 3, 2, w2) ==
        doctest::Approx(1.5 - 0.3 * std::log(0.3) - 0.2 * std::log(0.2)).epsilon(1e-14));
}

TEST_CASE("config validation and omega schedule") {
  optim::OptimConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  for (int m = 0; m < 30; ++m) CHECK(cfg.omega(m + 1) < cfg.omega(m));
  CHECK(cfg.omega(0) == 0.5);
  CHECK(cfg.omega(60) < 1e-15);
  cfg.cluster_threshold = 1.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.omega_ratio = 1.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.fd_step = 0.0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("pack and unpack round trip") {
  MultiDomain one({wobbly()});
  CHECK_FALSE(optim::optimizes_centers(one));
  const auto x = optim::pack(one, false);
  REQUIRE(x.size() == 5);
  CHECK(x[0] == one.components[0].a0);
  CHECK(x[1] == one.components[0].a[0]);
  CHECK(x[3] == one.components[0].b[0]);

  auto t = ShapeFourier::disk(0.3, {2.0, -1.0});
  MultiDomain two({wobbly(), t});
  two.components[0].center = {0.5, 0.25};
  CHECK(optim::optimizes_centers(two));
  const auto y = optim::pack(two, true);
  REQUIRE(y.size() == 5 + 1 + 2);
  CHECK(y[6] == 2.0);
  CHECK(y[7] == -1.0);
  const auto back = optim::unpack(two, y, true);
  CHECK(optim::pack(back, true) == y);
  CHECK(back.components[0].center == two.components[0].center);
  CHECK(back.components[1].center == two.components[1].center);
}

TEST_CASE("fd_gradient vanishes on a disk") {
  ShapeFourier d = ShapeFourier::disk(kUnitR);
  d.a = {0.0, 0.0};
  d.b = {0.0, 0.0};
  const MultiDomain disk({d});
  optim::OptimConfig cfg;
  const auto g = optim::fd_gradient(disk, 10.0, 1, cfg, {});
  const double l1 = ball::ball_lambda_k({2, kUnitR}, 10.0, 1);
  REQUIRE(g.size() == 5);
  for (double v : g) CHECK(std::abs(v) <= 1e-3 * l1);
}

TEST_CASE("directional derivative along the gradient") {
  const MultiDomain d({wobbly()});
  optim::OptimConfig cfg;
  const auto g = optim::fd_gradient(d, 5.0, 1, cfg, {});
  const double norm = std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
  REQUIRE(norm > 0.0);
  std::vector<double> dir(g);
  for (double& v : dir) v /= norm;
  const double centered = optim::centered_directional_derivative(d, 5.0, 1, dir, cfg, {});
  CHECK(centered > 0.0);
  CHECK(centered == doctest::Approx(norm).epsilon(0.02));
}

TEST_CASE("minimize: disk start stays put") {
  const MultiDomain disk({ShapeFourier::disk(kUnitR)});
  optim::OptimConfig cfg;
  cfg.max_iters = 3;
  const auto r = optim::minimize(disk, 10.0, 1, cfg, {});
  const double ball = ball::ball_lambda_k({2, kUnitR}, 10.0, 1);
  REQUIRE_FALSE(r.trace.iterates.empty());
  CHECK(r.trace.iterates.back().objective == doctest::Approx(ball).epsilon(1e-6));
  CHECK(std::abs(r.domain.total_area() - 1.0) <= 1e-12);
}

TEST_CASE("property: descent, area constraint and determinism") {
  const MultiDomain d({wobbly()});
  optim::OptimConfig cfg;
  cfg.max_iters = 3;
  const auto a = optim::minimize(d, 5.0, 1, cfg, {});
  const auto b = optim::minimize(d, 5.0, 1, cfg, {});
  REQUIRE(a.trace.iterates.size() >= 2);
  for (std::size_t i = 1; i < a.trace.iterates.size(); ++i) {
    // same barrier weight means same objective function
    if (a.trace.iterates[i].omega == a.trace.iterates[i - 1].omega)
      CHECK(a.trace.iterates[i].objective <= a.trace.iterates[i - 1].objective);
  }
  CHECK(a.trace.iterates.back().objective < a.trace.iterates.front().objective);
  for (const auto& it : a.trace.iterates) {
    const auto dom = optim::unpack(d, it.coeffs, false);
    CHECK(std::abs(dom.total_area() - cfg.volume) <= 1e-12);
  }
  REQUIRE(a.trace.iterates.size() == b.trace.iterates.size());
  for (std::size_t i = 0; i < a.trace.iterates.size(); ++i) {
    CHECK(a.trace.iterates[i].objective == b.trace.iterates[i].objective);
    CHECK(a.trace.iterates[i].coeffs == b.trace.iterates[i].coeffs);
  }
  CHECK(a.trace.stop_reason == b.trace.stop_reason);
}

TEST_CASE("seeded topologies for lambda_2") {
  optim::OptimConfig cfg;
  cfg.max_iters = 0;
  const std::vector<std::vector<int>> parts{{2}, {1, 1}};
  const auto res = optim::topology_sweep(1.0, 2, parts, cfg, {});
  REQUIRE(res.candidates.size() == 2);
  CHECK(res.winner().label == "1+1");
  const double b2 = ball::ball_lambda_k(ball::BallSpec::with_volume(2, 0.5), 1.0, 1);
  CHECK(res.winner().lambda_n == doctest::Approx(b2).epsilon(1e-6));
  // Wolf-Keller value is (lambda_2*)^{N/2} = lambda_2* for N = 2
  CHECK(res.wolf_keller_lambda == doctest::Approx(b2).epsilon(1e-9));
  CHECK_THROWS(optim::topology_sweep(1.0, 2, {{1, 1, 1}}, cfg, {}));
}

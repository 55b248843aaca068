#include "robinopt/ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "robinopt/specfun.hpp"

namespace robinopt::ball {

using specfun::bessel_j;

namespace {

long long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double order_of(int N, int ell) { return ell + 0.5 * N - 1.0; }

// k-th positive root z of robin_ball_equation for ell + alpha*r > 0.
double robin_root(int N, int ell, double alpha_r, int k) {
  const double nu = order_of(N, ell);
  auto f = [&](double z) { return robin_ball_equation(N, ell, alpha_r, z); };
  const double hi = specfun::bessel_j_zero(nu, k);
  double lo;
  if (k > 1) {
    lo = specfun::bessel_j_zero(nu, k - 1);
  } else {
    // f > 0 just above the origin; shrink until the sign is visible.
    lo = 0.5 * hi;
    while (!(f(lo) > 0.0)) {
      lo *= 0.5;
      if (lo < 1e-300) throw std::runtime_error("ball: first Robin root not bracketed");
    }
  }
  const auto bracket = specfun::RootBracket::make(f, lo, hi);
  return specfun::find_root(f, bracket, 4.0 * std::numeric_limits<double>::epsilon() * hi);
}

void check_ball(const BallSpec& b) {
  if (b.dim < 1) throw std::invalid_argument("ball: dimension must be >= 1");
  if (!(b.radius > 0.0)) throw std::invalid_argument("ball: radius must be > 0");
}

}  // namespace

BallSpec BallSpec::with_volume(int dim, double volume) {
  if (!(volume > 0.0)) throw std::invalid_argument("ball: volume must be > 0");
  return {dim, std::pow(volume / unit_ball_volume(dim), 1.0 / dim)};
}

double BallSpec::volume() const { return unit_ball_volume(dim) * std::pow(radius, dim); }

double unit_ball_volume(int N) {
  if (N < 1) throw std::invalid_argument("unit_ball_volume: N must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

int harmonic_multiplicity(int N, int ell) {
  if (ell == 0) return 1;
  if (N == 2) return 2;
  return static_cast<int>(binomial(N + ell - 1, ell) - binomial(N + ell - 3, ell - 2));
}

double robin_ball_equation(int N, int ell, double alpha_r, double z) {
  const double nu = order_of(N, ell);
  return z * bessel_j(nu - 1.0, z) + (alpha_r - ell - N + 2) * bessel_j(nu, z);
}

double ball_eigenvalue(const BallSpec& ball, double alpha, int ell, int k) {
  check_ball(ball);
  if (alpha < 0.0) throw std::invalid_argument("ball_eigenvalue: alpha must be >= 0");
  if (ell < 0 || k < 1) throw std::invalid_argument("ball_eigenvalue: need ell >= 0, k >= 1");
  const double r = ball.radius;
  const double alpha_r = alpha * r;
  double z;
  if (ell == 0 && alpha_r == 0.0) {
    if (k == 1) return 0.0;
    // Neumann radial family: z J_{nu+1}(z) = 0, the nonzero roots are j_{nu+1, k-1}.
    z = specfun::bessel_j_zero(order_of(ball.dim, 0) + 1.0, k - 1);
  } else {
    z = robin_root(ball.dim, ell, alpha_r, k);
  }
  return (z / r) * (z / r);
}

std::vector<BallSpectrumEntry> ball_spectrum(const BallSpec& ball, double alpha, int count) {
  check_ball(ball);
  if (count < 1) throw std::invalid_argument("ball_spectrum: count must be >= 1");

  std::vector<BallSpectrumEntry> families;
  // count-th smallest eigenvalue (with multiplicity) among the families found so far.
  auto threshold = [&]() {
    std::sort(families.begin(), families.end(), [](const auto& a, const auto& b) {
      return std::tie(a.lambda, a.ell, a.k) < std::tie(b.lambda, b.ell, b.k);
    });
    int seen = 0;
    for (const auto& e : families) {
      seen += e.multiplicity;
      if (seen >= count) return e.lambda;
    }
    return std::numeric_limits<double>::infinity();
  };

  for (int ell = 0;; ++ell) {
    const int mult = harmonic_multiplicity(ball.dim, ell);
    const double limit = threshold();
    const double first = ball_eigenvalue(ball, alpha, ell, 1);
    // First roots increase with ell, so no later family can contribute.
    if (first > limit) break;
    families.push_back({first, ell, 1, mult});
    for (int k = 2; k <= count; ++k) {
      const double lam = ball_eigenvalue(ball, alpha, ell, k);
      if (lam > threshold()) break;
      families.push_back({lam, ell, k, mult});
    }
  }
  threshold();

  std::vector<BallSpectrumEntry> out;
  out.reserve(count);
  for (const auto& e : families) {
    for (int m = 0; m < e.multiplicity && static_cast<int>(out.size()) < count; ++m) out.push_back(e);
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

double ball_lambda_k(const BallSpec& ball, double alpha, int k) {
  return ball_spectrum(ball, alpha, k).back().lambda;
}

double union_of_balls_eigenvalue(std::span<const BallSpec> balls, double alpha, int n) {
  if (balls.empty()) throw std::invalid_argument("union_of_balls_eigenvalue: no balls");
  if (n < 1) throw std::invalid_argument("union_of_balls_eigenvalue: n must be >= 1");
  std::vector<double> merged;
  for (const auto& b : balls) {
    if (b.dim != balls.front().dim) throw std::invalid_argument("union_of_balls_eigenvalue: mixed dimensions");
    for (const auto& e : ball_spectrum(b, alpha, n)) merged.push_back(e.lambda);
  }
  std::nth_element(merged.begin(), merged.begin() + (n - 1), merged.end());
  return merged[n - 1];
}

double transition_equation(int N, double gamma) {
  const double C = std::pow(N + 1.0, 1.0 / N);
  const double p = 0.5 * N;
  const double Cg = C * gamma;
  const double jm = bessel_j(p - 1.0, gamma);
  const double j0 = bessel_j(p, gamma);
  return jm * bessel_j(p, Cg) - Cg * jm * bessel_j(p + 1.0, Cg) + Cg * j0 * bessel_j(p, Cg);
}

TransitionResult transition_alpha(int N, int n, double V) {
  if (N < 2) throw std::invalid_argument("transition_alpha: N must be >= 2");
  if (n < N + 1) throw std::invalid_argument("transition_alpha: n must be >= N + 1");
  if (!(V > 0.0)) throw std::invalid_argument("transition_alpha: V must be > 0");

  const double p = 0.5 * N;
  const double upper = specfun::bessel_j_zero(p - 1.0, 1);
  auto f = [N](double g) { return transition_equation(N, g); };
  const double step = 0.01;
  double a = step, fa = f(a);
  double gamma0 = std::numeric_limits<double>::quiet_NaN();
  for (double b = a + step; b < upper; a = b, b += step) {
    const double fb = f(b);
    if (fa == 0.0) {
      gamma0 = a;
      break;
    }
    if ((fa < 0) != (fb < 0)) {
      gamma0 = specfun::find_root(f, {a, b, fa, fb}, 1e-15);
      break;
    }
    fa = fb;
  }
  if (std::isnan(gamma0)) throw std::runtime_error("transition_alpha: no root below the first Bessel zero");

  TransitionResult res;
  res.n = n;
  res.gamma0 = gamma0;
  res.C_N = std::pow(N + 1.0, 1.0 / N);
  res.alpha_n = gamma0 * bessel_j(p, gamma0) / bessel_j(p - 1.0, gamma0) *
                std::pow(n * unit_ball_volume(N) / V, 1.0 / N);
  return res;
}

double ball_lambda1_alpha_slope(const BallSpec& ball, double alpha) {
  check_ball(ball);
  if (alpha < 0.0) throw std::invalid_argument("ball_lambda1_alpha_slope: alpha must be >= 0");
  const double r = ball.radius;
  if (alpha == 0.0) return ball.dim / r;
  const double z = std::sqrt(ball_eigenvalue(ball, alpha, 0, 1)) * r;
  const double nu = order_of(ball.dim, 0);
  const double j = bessel_j(nu, z);
  const double jp = bessel_j(nu + 1.0, z);
  // |u|^2 on the sphere over |u|^2 in the ball for u = rho^{1-N/2} J_nu(z rho / r).
  const double interior = j * j + jp * jp - 2.0 * nu / z * j * jp;
  return 2.0 * j * j / (r * interior);
}

}  // namespace robinopt::ball

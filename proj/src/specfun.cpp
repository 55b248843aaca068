#include "robinopt/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

namespace robinopt::specfun {

namespace {

// Double precision throughout; the default policy promotes to long double.
using Policy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

bool same_sign(double a, double b) { return (a > 0 && b > 0) || (a < 0 && b < 0); }

}  // namespace

RootBracket RootBracket::make(const std::function<double(double)>& f, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("root bracket: lo must be < hi");
  RootBracket b{lo, hi, f(lo), f(hi)};
  if (!(b.f_lo < 0 && b.f_hi > 0) && !(b.f_lo > 0 && b.f_hi < 0)) {
    throw std::invalid_argument("root bracket: no sign change on [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
  return b;
}

double bessel_j(double nu, double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_j: x must be >= 0");
  if (nu < -1.0) throw std::domain_error("bessel_j: order must be >= -1");
  if (nu == -1.0) return -boost::math::cyl_bessel_j(1, x, Policy());
  if (nu == std::floor(nu)) return boost::math::cyl_bessel_j(static_cast<int>(nu), x, Policy());
  return boost::math::cyl_bessel_j(nu, x, Policy());
}

double bessel_y(int order, double x) {
  if (order != 0 && order != 1) throw std::domain_error("bessel_y: only orders 0 and 1");
  if (!(x > 0.0)) throw std::domain_error("bessel_y: x must be > 0");
  return boost::math::cyl_neumann(order, x, Policy());
}

double bessel_j_zero(double p, int q) {
  if (p < 0.0) throw std::domain_error("bessel_j_zero: order must be >= 0");
  if (q < 1) throw std::domain_error("bessel_j_zero: index must be >= 1");
  return boost::math::cyl_bessel_j_zero(p, q, Policy());
}

std::complex<double> hankel1(int order, double x) {
  if (order != 0 && order != 1) throw std::domain_error("hankel1: only orders 0 and 1");
  if (!(x > 0.0)) throw std::domain_error("hankel1: x must be > 0");
  return {boost::math::cyl_bessel_j(order, x, Policy()), boost::math::cyl_neumann(order, x, Policy())};
}

double find_root(const std::function<double(double)>& f, RootBracket bracket, double tol) {
  double a = bracket.lo, b = bracket.hi;
  double fa = bracket.f_lo, fb = bracket.f_hi;
  if (same_sign(fa, fb) || fa == 0.0 || fb == 0.0) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    throw std::invalid_argument("find_root: invalid bracket");
  }
  bool bisect = false;
  for (int iter = 0; iter < 400 && (b - a) > tol; ++iter) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    double x = b - fb * (b - a) / (fb - fa);
    if (bisect || !(x > a && x < b)) x = mid;
    const double fx = f(x);
    if (fx == 0.0) return x;
    const double width = b - a;
    if (same_sign(fx, fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    // Force a bisection whenever a secant step failed to halve the bracket.
    bisect = (b - a) > 0.5 * width;
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace robinopt::specfun

#pragma once

// Bessel functions of the first kind, their zeros, the Hankel kernel of the
// 2-D Helmholtz fundamental solution and a bracketing root finder.

#include <complex>
#include <functional>
#include <stdexcept>

namespace robinopt::specfun {

struct RootBracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;

  /// Evaluates f at both ends; throws std::invalid_argument unless the
  /// values have strictly opposite signs and lo < hi.
  static RootBracket make(const std::function<double(double)>& f, double lo, double hi);
};

/// J_nu(x) for nu >= -1 and x >= 0. Throws std::domain_error for x < 0.
double bessel_j(double nu, double x);

/// Y_0 and Y_1 only.
double bessel_y(int order, double x);

/// q-th positive zero j_{p,q} of J_p, p >= 0, q >= 1.
double bessel_j_zero(double p, int q);

/// H^(1)_order(x) = J_order(x) + i Y_order(x), order in {0, 1}, x > 0.
std::complex<double> hankel1(int order, double x);

/// Bisection/secant hybrid. Returns a point of the final bracket, whose width
/// is at most tol (or the bracket collapsed to adjacent doubles).
double find_root(const std::function<double(double)>& f, RootBracket bracket, double tol);

}  // namespace robinopt::specfun

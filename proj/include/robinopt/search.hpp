#pragma once

#include <cmath>
#include <utility>

namespace robinopt {

struct Minimum {
  double x;
  double value;
  double lo;  // final bracket
  double hi;
};

/// Golden-section minimisation of a unimodal f on [a, b] until the bracket
/// is narrower than tol.
template <class F>
Minimum golden_section(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      if (!(c > a && c < d)) break;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      if (!(d > c && d < b)) break;
      fd = f(d);
    }
  }
  return fc <= fd ? Minimum{c, fc, a, b} : Minimum{d, fd, a, b};
}

}  // namespace robinopt

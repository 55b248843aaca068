#pragma once

// Analytic Robin spectra of N-dimensional balls and of disjoint unions of
// balls, plus the transition values at which n equal balls stop being the
// best ball union.

#include <span>
#include <vector>

namespace robinopt::ball {

struct BallSpec {
  int dim = 2;
  double radius = 1.0;

  /// Ball of the given dimension and volume.
  static BallSpec with_volume(int dim, double volume);
  double volume() const;
};

struct BallSpectrumEntry {
  double lambda;
  int ell;           // angular index
  int k;             // radial index within the angular family
  int multiplicity;  // dimension of the spherical-harmonic space of degree ell
};

struct TransitionResult {
  int n;
  double alpha_n;
  double gamma0;
  double C_N;
};

/// pi^{N/2} / Gamma(N/2 + 1).
double unit_ball_volume(int N);

/// Dimension of the space of degree-ell spherical harmonics on S^{N-1}.
int harmonic_multiplicity(int N, int ell);

/// Robin boundary function for angular index ell evaluated at z = sqrt(lambda)*r:
///   z J_{nu-1}(z) + (alpha r - ell - N + 2) J_nu(z),   nu = ell + N/2 - 1.
/// Its positive roots in z are the radial Robin eigenfrequencies times r.
double robin_ball_equation(int N, int ell, double alpha_r, double z);

/// k-th eigenvalue (k >= 1) of the angular-ell family. For alpha = 0 and
/// ell = 0 the k = 1 eigenvalue is the constant Neumann mode, 0.
double ball_eigenvalue(const BallSpec& ball, double alpha, int ell, int k);

/// Lowest `count` eigenvalues, one entry per eigenvalue counted with
/// multiplicity, sorted ascending.
std::vector<BallSpectrumEntry> ball_spectrum(const BallSpec& ball, double alpha, int count);

/// The k-th eigenvalue (with multiplicity) of a single ball.
double ball_lambda_k(const BallSpec& ball, double alpha, int k);

/// n-th smallest eigenvalue of the disjoint union of `balls`.
double union_of_balls_eigenvalue(std::span<const BallSpec> balls, double alpha, int n);

/// Value of alpha at which n equal balls of total volume V tie with
/// n-(N+1) of those balls plus one ball of volume (N+1)V/n.
/// Requires N >= 2 and n >= N + 1.
TransitionResult transition_alpha(int N, int n, double V);

/// Left-hand side of the transition equation in gamma.
double transition_equation(int N, double gamma);

/// d lambda_1 / d alpha for a ball, from the ratio of boundary and interior
/// L2 norms of the first eigenfunction.
double ball_lambda1_alpha_slope(const BallSpec& ball, double alpha);

}  // namespace robinopt::ball

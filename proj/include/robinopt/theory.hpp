#pragma once

// Optimal-value machinery built on ball spectra: the best union of balls for
// lambda_n at fixed volume, the Wolf-Keller combination of lower optimal
// values, and the eigenvalue bounds checked against them.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robinopt::theory {

/// Best known lambda_n*(V, alpha).
struct StarEvaluator {
  int n = 1;
  std::function<double(double V, double alpha)> eval;
};

class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A disjoint union of balls. parts[i] is the eigenvalue index that ball i
/// contributes (its parts[i]-th eigenvalue equals lambda); parts sum to n.
struct BallUnion {
  double lambda = 0.0;
  std::vector<int> parts;      // descending
  std::vector<double> volumes;  // matching parts

  /// "3", "1+1+1", "3+1", ...
  std::string label() const;
};

std::string partition_label(std::span<const int> parts);

/// All partitions of n into at most max_parts positive parts, each in
/// descending order.
std::vector<std::vector<int>> partitions(int n, int max_parts);

/// Optimal ball unions in dimension N for a fixed Robin parameter.
class BallCatalog {
 public:
  explicit BallCatalog(int dim = 2);

  int dim() const { return dim_; }

  /// Union of balls with total volume V minimising lambda_n over all
  /// partitions of n and all volume splits.
  BallUnion best(int n, double V, double alpha) const;

  /// Optimal volume split for a fixed partition.
  BallUnion for_partition(std::span<const int> parts, double V, double alpha) const;

  double lambda_star(int n, double V, double alpha) const { return best(n, V, alpha).lambda; }
  StarEvaluator evaluator(int n) const;

  /// Smallest ball volumes v_1 <= v_2 <= ... <= v_jmax whose j-th eigenvalue
  /// does not exceed Lambda.
  std::vector<double> min_volumes(double alpha, double Lambda, int jmax) const;

 private:
  int dim_;
};

struct TwoBallSplit {
  double fraction;  // volume share of the ball carrying eigenvalue k1
  double lambda;    // max of the two eigenvalues at that share
};

/// Golden-section minimisation over f of
/// max(lambda_k1(ball of volume f V), lambda_k2(ball of volume (1 - f) V)).
TwoBallSplit two_ball_split(int N, double V, double alpha, int k1, int k2, double tol = 1e-10);

struct WKResult {
  int k = 0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  /// (lambda_n*)^{N/2} as combined from the best k.
  double value = 0.0;
  /// Combined value for k = 1 .. n-1.
  std::vector<double> per_k_values;
  std::vector<double> per_k_xi1;
};

/// Splits lambda_n* into lambda_k* and lambda_{n-k}* on two rescaled
/// components. evaluators[j-1] must evaluate lambda_j* for j = 1 .. n-1.
WKResult wolf_keller_combine(int n, int N, double V, double alpha, std::span<const StarEvaluator> evaluators);

enum class BoundKind { n_ball, gap_comp, gap_explicit, fig_est };

std::string to_string(BoundKind kind);

struct BoundsReport {
  int n = 0;
  double alpha = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  BoundKind kind = BoundKind::n_ball;
};

/// lambda_n(B_n, alpha) <= N alpha (n omega_N / V)^{1/N}.
BoundsReport n_ball_bound(int N, double V, double alpha, int n);

/// Radius of the ball B with lambda_1(B, (V/(V+|B|))^{1/N} alpha) = lambda_n_star.
double bstar_radius(int N, double V, double alpha, double lambda_n_star);

/// (lambda_{n+1}*)^{N/2} - (lambda_n*)^{N/2} against the B*-based bound.
BoundsReport gap_bound_comp(int N, double V, double alpha, int n, double lambda_n_star, double lambda_n1_star);

/// Right-hand side of the bound comp for the given lambda_n*.
double gap_bound_comp_rhs(int N, double V, double alpha, double lambda_n_star);

/// (omega_N / V) lambda_1(B_1, (V / omega_N)^{1/N} alpha)^{N/2}.
double gap_bound_explicit(int N, double V, double alpha);

/// (lambda_{n+1}*)^{N/2} - (lambda_n*)^{N/2} against gap_bound_explicit (strict).
BoundsReport gap_explicit_report(int N, double V, double alpha, int n, double lambda_n_star, double lambda_n1_star);

/// N = 2, V = 1: lambda_{n+1}* - lambda_n* - pi lambda_1(B_1, (|B*|/(1+|B*|))^{1/2} pi^{-1/2} alpha).
double gap_verification_quantity(int n, double alpha, double lambda_n_star, double lambda_n1_star);

BoundsReport fig_est_report(int n, double alpha, double lambda_n_star, double lambda_n1_star);

struct RemarkCheck {
  double lambda2_star;   // lambda_2(B_2, alpha), two unit-area/2 disks
  double via_scaling;    // 2 lambda_1(B, alpha / sqrt 2), B of unit area
  double twice_lambda1;  // 2 lambda_1(B, alpha)
  bool holds;
};

/// N = 2, V = 1: lambda_2*(alpha) < 2 lambda_1*(alpha).
RemarkCheck remark_gap_check(double alpha);
bool remark_gap_inequality_check(double alpha);

struct TrendReport {
  std::vector<double> lambda_star;  // n = 1 .. n_max
  /// (lambda_{n+1}*)^{N/2} - (lambda_n*)^{N/2}, n = 1 .. n_max - 1.
  std::vector<double> gaps;
  /// Smallest n from which the gap sequence is non-increasing.
  int monotone_from = 0;
  /// max_n lambda_n* / n^{1/N} and its n-ball ceiling N alpha (omega_N / V)^{1/N}.
  double max_growth_ratio = 0.0;
  double growth_ceiling = 0.0;
  bool bounded = false;
};

TrendReport trend_checks(const BallCatalog& catalog, double V, double alpha, int n_max);

/// |t^2 ev(V, alpha / t) - ev(t^{-N} V, alpha)| relative to the second value.
double star_scaling_defect(const StarEvaluator& ev, int N, double V, double alpha, double t);

}  // namespace robinopt::theory

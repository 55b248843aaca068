#pragma once

// Steepest descent on the Fourier coefficients of area-normalised domains,
// minimising lambda_n with log-barrier terms on small gaps below it.

#include <span>
#include <string>
#include <vector>

#include "robinopt/geometry.hpp"
#include "robinopt/mfs.hpp"

namespace robinopt::optim {

using geometry::MultiDomain;

struct OptimConfig {
  double volume = 1.0;
  /// One-sided finite-difference step.
  double fd_step = 1e-5;
  /// A gap below lambda_n joins the barrier when gap / lambda_n < theta.
  double cluster_threshold = 0.1;
  /// Barrier weights omega^(m) = omega0 * omega_ratio^m.
  double omega0 = 0.5;
  double omega_ratio = 0.5;
  /// Advance m after this many iterations, or earlier on a stall.
  int omega_advance_every = 10;
  int max_iters = 200;
  /// Golden-section tolerance as a fraction of the step bracket.
  double line_search_tol = 1e-4;
  /// Stop once the relative objective decrease over stall_window iterations
  /// falls below stall_tol.
  double stall_tol = 1e-7;
  int stall_window = 5;
  /// Line search over x in [0, x_max]; the step is x times the unit
  /// direction scaled by the radius of the disk of area `volume`.
  double x_max = 1.0;

  void validate() const;
  double omega(int m) const;
};

struct Iterate {
  std::vector<double> coeffs;
  std::vector<double> lambda_values;
  double objective;
  double step;
  int active_count;
  double omega;
};

struct OptimTrace {
  std::vector<Iterate> iterates;
  /// Eigenvalues of the final domain, with the multiplicities reported by the solver.
  std::vector<mfs::Eigenpair> final_eigs;
  std::string stop_reason;
};

/// Coefficient layout: per component a0, a_1..a_M, b_1..b_M; then, when
/// with_centers is set, the two center coordinates of every component after
/// the first.
std::vector<double> pack(const MultiDomain& domain, bool with_centers);
MultiDomain unpack(const MultiDomain& layout, std::span<const double> x, bool with_centers);

/// Centers move only when there is more than one component.
bool optimizes_centers(const MultiDomain& domain);

/// lambda_1 .. lambda_n (with multiplicity) from the solver. Multi-component
/// domains are solved one component at a time.
std::vector<double> lambdas(const MultiDomain& domain, double alpha, int n, const mfs::MfsConfig& mfs);

/// (lambda_n(P_i) - lambda_n(C)) / eps with P_i = C + eps e_i renormalised to
/// the configured volume. C is normalised first.
std::vector<double> fd_gradient(const MultiDomain& domain, double alpha, int n, const OptimConfig& cfg,
                                const mfs::MfsConfig& mfs);

/// Centered differences of lambda_n along `direction` (unit length in
/// coefficient space), for checking the one-sided gradient.
double centered_directional_derivative(const MultiDomain& domain, double alpha, int n, std::span<const double> direction,
                                       const OptimConfig& cfg, const mfs::MfsConfig& mfs);

/// lambda_n - sum_{j=1..active_count} omegas[j-1] log(lambda_{n-j+1} - lambda_{n-j}).
/// lambda_values are 1-based in the formula and sorted ascending.
double clustered_objective(std::span<const double> lambda_values, int n, int active_count,
                           std::span<const double> omegas);

struct MinimizeResult {
  MultiDomain domain;
  OptimTrace trace;
};

MinimizeResult minimize(const MultiDomain& domain0, double alpha, int n, const OptimConfig& cfg,
                        const mfs::MfsConfig& mfs);

struct TopologyCandidate {
  std::vector<int> parts;
  std::string label;
  MultiDomain seed;
  double seed_lambda;  // ball-catalog value of the seed
  MultiDomain domain;
  double lambda_n;
  OptimTrace trace;
};

struct TopologyResult {
  std::vector<TopologyCandidate> candidates;
  int best = -1;
  /// Wolf-Keller value (lambda_n*)^{N/2} from ball-catalog evaluators, for comparison.
  double wolf_keller_lambda = 0.0;

  const TopologyCandidate& winner() const { return candidates.at(best); }
};

/// Disks with the catalog's volume split for each partition, placed along
/// the x axis with clear gaps.
MultiDomain seed_domain(std::span<const int> parts, double V, double alpha, int harmonics);

/// Optimises every partition (at most n parts each) and picks the lowest lambda_n.
/// With cfg.max_iters == 0 the seeds are only evaluated.
TopologyResult topology_sweep(double alpha, int n, const std::vector<std::vector<int>>& partitions,
                              const OptimConfig& cfg, const mfs::MfsConfig& mfs, int harmonics = 0);

}  // namespace robinopt::optim

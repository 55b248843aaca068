#pragma once

// Method of fundamental solutions for the 2-D Robin Laplacian.
//
// Eigenfunctions are expanded in Helmholtz point sources placed outside the
// domain. Eigenvalues are the lambda at which some combination of sources
// satisfies the Robin condition at every collocation point without
// vanishing inside the domain.

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "robinopt/geometry.hpp"

namespace robinopt::mfs {

using geometry::MultiDomain;
using geometry::Point;

class NotEnoughEigenvalues : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MfsConfig {
  /// Collocation points per component; empty selects max(80, 16 (M + 1)).
  std::vector<int> np_per_component;
  /// Source offset as a fraction of each component's mean radius.
  double gamma = 0.4;
  /// Scan window. lambda_max <= 0 selects it from inscribed-disk Dirichlet
  /// bounds; lambda_min <= 0 selects 0.9 x the Faber-Krahn ball value.
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Grid spacing in sqrt(lambda); <= 0 spreads max(scan_points, 48 count + 48) points over the window.
  double scan_step = 0.0;
  int scan_points = 48;
  /// Collocation density used during the coarse scan, relative to the full one.
  double scan_np_fraction = 0.5;
  double refine_tol = 1e-10;
  double singularity_threshold = 1e-5;
  /// Singular values below max(multiplicity_factor * sigma_min, multiplicity_floor)
  /// count toward the multiplicity of a refined eigenvalue.
  double multiplicity_factor = 1e3;
  double multiplicity_floor = 1e-9;
  /// A second singular value below this triggers a search for a nearby
  /// distinct eigenvalue hidden in the same dip.
  double cluster_probe = 0.05;
  /// Interior check points per component, relative to the collocation count.
  double interior_fraction = 0.5;
  /// Solve each component separately and merge the spectra.
  bool decouple_components = false;
  unsigned seed = 0;

  void validate() const;
};

struct Eigenpair {
  double lambda;
  double residual;
  int multiplicity = 1;
  std::optional<int> component_hint;
};

struct EigResult {
  /// Sorted ascending; an eigenvalue of multiplicity m appears m times.
  std::vector<Eigenpair> eigenvalues;

  std::vector<double> lambdas() const;
};

/// Collocation, source and interior points for one domain.
struct Discretization {
  std::vector<geometry::BoundaryPoint> boundary;
  std::vector<Point> sources;
  std::vector<Point> interior;

  static Discretization build(const MultiDomain& domain, const MfsConfig& cfg, double np_scale = 1.0);
  int size() const { return static_cast<int>(sources.size()); }
};

std::vector<int> default_np(const MultiDomain& domain);

/// A_ij = (i/4) [ -sqrt(lambda) H1(sqrt(lambda) d_ij) (x_i - y_j).n_i / d_ij + alpha H0(sqrt(lambda) d_ij) ].
Eigen::MatrixXcd assemble(const MultiDomain& domain, double alpha, double lambda, const MfsConfig& cfg);
Eigen::MatrixXcd assemble(const Discretization& disc, double alpha, double lambda);

/// Source values (i/4) H0(sqrt(lambda) |z_i - y_j|) at the interior points.
Eigen::MatrixXcd assemble_interior(const Discretization& disc, double lambda);

/// Smallest singular value after scaling every column to unit norm.
double singularity_measure(const Eigen::MatrixXcd& A);

/// Singular values (ascending) of the boundary block of an orthonormal basis
/// for the column space of [boundary; interior]. They vanish exactly when a
/// source combination satisfies the boundary condition but not trivially.
Eigen::VectorXd subspace_singular_values(const Eigen::MatrixXcd& boundary, const Eigen::MatrixXcd& interior);

/// subspace_singular_values for the discretised problem at lambda, with the
/// boundary rows scaled by 1 / (1 + alpha / sqrt(lambda)).
Eigen::VectorXd subspace_measure(const Discretization& disc, double alpha, double lambda);

/// Lowest `count` eigenvalues (with multiplicity). Throws NotEnoughEigenvalues
/// if the scan window holds fewer.
EigResult eigenvalues(const MultiDomain& domain, double alpha, int count, const MfsConfig& cfg = {});

/// Scan window used by eigenvalues() when the config leaves it open.
std::pair<double, double> auto_window(const MultiDomain& domain, double alpha, int count);

/// |lambda_n(MFS) - lambda_n(ball)| / lambda_n(ball) for a disk.
double validate_against_ball(double radius, double alpha, int n, const MfsConfig& cfg = {});

}  // namespace robinopt::mfs

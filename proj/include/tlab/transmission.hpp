#pragma once

#include "tlab/geometry.hpp"
#include "tlab/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tlab {

/// Transmission eigenpair (v, w) with ||v||_{L2(Omega)} = 1.
struct TransmissionEigenpair {
  double k = 0.0;
  std::string method;  // "disk_mode" or "mfs"
  Domain domain = DiskDomain{};
  double contrast = 0.0;

  // disk_mode: v = amp_v J_m(k r) e^{i m theta}, w = amp_w J_m(k n r) e^{i m theta} about the center
  int mode = 0;
  Complex amp_v{};
  Complex amp_w{};

  // mfs: single-layer sums of Phi_k (v) and Phi_{k n} (w) over the charges
  Points charges;
  Eigen::VectorXcd coeff_v;
  Eigen::VectorXcd coeff_w;
  double sigma = 0.0;

  double residual_value = 0.0;   // max |w - v| on the boundary / sup |v|
  double residual_normal = 0.0;  // max |d_nu (w - v)| / k on the boundary / sup |v|
  double v_norm = 0.0;           // ||v||_{L2(Omega)} after normalization

  double n_ref() const { return std::sqrt(1.0 + contrast); }
  Complex v(const Point& x) const;
  Complex w(const Point& x) const;
  /// Gradients of v and w.
  CPoint grad_v(const Point& x) const;
  CPoint grad_w(const Point& x) const;
  FieldSampler v_sampler() const;
};

/// Cauchy-data determinant of mode m for the disk of radius a; identically zero when n_ref = 1.
Complex disk_determinant(int m, double k, double a, double n_ref);

struct DiskEigenvalue {
  int m = 0;
  double k = 0.0;
};

struct DiskEigenvalues {
  std::vector<DiskEigenvalue> roots;  // sorted by k
  std::vector<std::string> warnings;
};

DiskEigenvalues disk_eigenvalues(int m_max, double k_lo, double k_hi, double a, double n_ref,
                                 double step = 2e-3);

/// Mode-m pair for a disk; throws PreconditionError unless |det(m, k)| <= 1e-8.
TransmissionEigenpair disk_eigenfunction(int m, double k, const DiskDomain& disk, double contrast);

struct MfsParameters {
  int n_charge = 100;
  int n_colloc = 0;             // 0 selects 2 * n_charge
  double charge_offset = 0.35;  // fraction of the diameter
  int n_interior = 60;
  std::uint64_t seed = 0;
};

/// Collocation geometry shared by all wavenumbers of a scan.
struct MfsSetup {
  Domain domain = DiskDomain{};
  Points colloc;
  Points normals;
  Points charges;
  Points interior;
};

MfsSetup mfs_setup(const Domain& domain, const MfsParameters& params);

/// Boundary rows [w - v; d_nu (w - v) / k] over the columns [v charges | w charges],
/// each column scaled to unit norm.
Eigen::MatrixXcd mfs_matrix(const MfsSetup& setup, double k, double contrast);
Eigen::MatrixXcd mfs_matrix(const Domain& domain, double k, double contrast, const MfsParameters& params);

/// Sine of the angle between the solution space and boundary-vanishing functions:
/// singular values of the boundary block of an orthonormal basis that also spans interior samples.
Eigen::VectorXd mfs_subspace_singular_values(const MfsSetup& setup, double k, double contrast);

struct DetectedMinimum {
  double k = 0.0;
  double sigma = 0.0;
  int multiplicity = 1;  // subspace singular values at k below the threshold
};

struct SingularValueScan {
  std::vector<double> k_grid;
  std::vector<double> sigma_min;
  double threshold = 0.0;
  std::vector<DetectedMinimum> minima;

  std::vector<double> detected_minima() const;
};

SingularValueScan scan_eigenvalues(const Domain& domain, double contrast, double k_lo, double k_hi,
                                   double scan_step, const MfsParameters& params = {});

/// Eigenpair from the `which`-th smallest subspace singular vector at k (0 = smallest).
/// Throws DomainError if that singular value exceeds `threshold`.
TransmissionEigenpair reconstruct_eigenfunction(const Domain& domain, double contrast, double k,
                                                const MfsParameters& params, int which = 0,
                                                double threshold = 1e-2);

struct VanishingProfile {
  std::vector<double> radii;
  std::vector<double> averages;   // ball average of |v|
  std::vector<bool> radius_warnings;
  double domain_average = 0.0;    // (1/|Omega|) integral of |v|
};

VanishingProfile vanishing_profile(const FieldSampler& v, const Domain& domain, const Point& center,
                                   const std::vector<double>& radii, double grid_h = 0.0);
VanishingProfile vanishing_profile(const TransmissionEigenpair& pair, const Point& center,
                                   const std::vector<double>& radii);

/// Domain average of |v| by grid quadrature.
double domain_average_abs(const FieldSampler& v, const Domain& domain, double grid_h = 0.0);

}  // namespace tlab

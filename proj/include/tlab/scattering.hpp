#pragma once

#include "tlab/geometry.hpp"
#include "tlab/herglotz.hpp"
#include "tlab/types.hpp"

#include <optional>
#include <string>

namespace tlab {

/// Outgoing fundamental solution Phi_k(x) = (i/4) H_0^{(1)}(k|x|). Throws DomainError at x = 0.
Complex fundamental_solution(double k, const Point& x);

/// Incident field u^i: a Herglotz wave, a plane wave, or an arbitrary entire solution.
class IncidentField {
 public:
  static IncidentField herglotz(HerglotzKernel g, double k);
  static IncidentField plane_wave(const Point& direction, double k);
  static IncidentField from_sampler(FieldSampler f, double k, std::string name = "sampler");

  double wavenumber() const { return k_; }
  const std::string& name() const { return name_; }
  const std::optional<HerglotzKernel>& kernel() const { return kernel_; }

  Complex operator()(const Point& x) const;
  Eigen::VectorXcd sample(const Points& x) const;

  /// a_n with u^i(c + r e^{i psi}) = sum_{|n| <= n_max} a_n J_n(k r) e^{i n psi}, index n + n_max.
  /// Exact for Herglotz and plane waves; fitted from circle samples inside `radius` otherwise,
  /// in which case orders with J_n(k r) below about 1e-12 on every circle are returned as zero.
  Eigen::VectorXcd cylindrical_coeffs(const Point& c, double radius, int n_max) const;

 private:
  FieldSampler f_;
  double k_ = 0.0;
  std::string name_;
  std::optional<HerglotzKernel> kernel_;
  std::optional<Point> direction_;
};

struct SolverOptions {
  double tol = 1e-8;                 // relative residual target
  int restart = 80;
  int max_iterations = 800;
  std::size_t dense_cap = 6000;      // above this the operator is applied matrix-free, no LU fallback
  bool modal_disk = true;            // exact separation of variables for constant real contrast on a disk
};

struct SolverDiagnostics {
  std::string method;                // "trivial", "modal", "gmres", "lu"
  int iterations = 0;
  double residual = 0.0;             // relative residual of the discrete equation
  bool fallback = false;
};

/// Separated solution for a disk: inside u = sum alpha_n J_n(k n_ref r) e^{in psi},
/// outside u = u^i + sum beta_n H_n(k r) e^{in psi}, with r, psi about `center`.
struct ModalSolution {
  Point center = Point::Zero();
  double radius = 1.0;
  double n_ref = 1.0;
  int n_max = 0;
  Eigen::VectorXcd incident;  // a_n
  Eigen::VectorXcd inside;    // alpha_n
  Eigen::VectorXcd outgoing;  // beta_n
};

struct ScatterResult {
  QuadratureGrid grid;
  Eigen::VectorXcd potential;  // V at the grid nodes
  Eigen::VectorXcd total;      // u
  Eigen::VectorXcd incident;   // u^i
  double k = 0.0;
  SolverDiagnostics diagnostics;
  std::optional<ModalSolution> modal;

  Eigen::VectorXcd scattered() const { return total - incident; }
};

/// Solves u = u^i + k^2 * integral of Phi_k(. - y) V(y) u(y) dy on the grid.
ScatterResult solve_total_field(const PotentialSpec& spec, const IncidentField& u_i, double k,
                                const QuadratureGrid& grid, const SolverOptions& options = {});

struct FarFieldPattern {
  Eigen::VectorXd directions;  // equispaced angles in [0, 2 pi)
  Eigen::VectorXcd values;
  double l2_norm = 0.0;        // trapezoid rule on the circle
};

inline constexpr int kMinFarFieldDirections = 64;

/// u^s_inf(x) = e^{i pi/4} / sqrt(8 pi k) * k^2 * integral of e^{-i k x.y} V(y) u(y) dy.
FarFieldPattern far_field(const PotentialSpec& spec, const ScatterResult& result, int directions = 128);
Complex far_field_at(const ScatterResult& result, double theta);

struct ScatteredValues {
  Eigen::VectorXcd values;
  std::size_t inside_count = 0;  // evaluation points flagged as lying inside the support
};

/// u^s(x) = k^2 * integral of Phi_k(x - y) V(y) u(y) dy at arbitrary points.
ScatteredValues scattered_field_at(const PotentialSpec& spec, const ScatterResult& result,
                                   const Points& points);

/// Integral of Phi_k(x_i - y) over the grid cell of node i.
Complex self_cell_integral(const Domain& domain, const QuadratureGrid& grid, std::size_t i, double k);

}  // namespace tlab

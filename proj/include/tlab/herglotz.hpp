#pragma once

#include "tlab/geometry.hpp"
#include "tlab/types.hpp"

#include <array>
#include <optional>
#include <string>

namespace tlab {

/// Kernel g(theta) = sum_{m=-M}^{M} c_m e^{i m theta} on the unit circle.
class HerglotzKernel {
 public:
  HerglotzKernel() = default;
  explicit HerglotzKernel(Eigen::VectorXcd coeffs);  // length 2M + 1, index m + M
  static HerglotzKernel zero(int M);
  static HerglotzKernel single_mode(int M, int m, Complex value);

  int truncation() const { return static_cast<int>(coeffs_.size() - 1) / 2; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Complex coeff(int m) const;
  /// ||g||_{L2(S^1)} = sqrt(2 pi sum |c_m|^2).
  double l2_norm() const { return l2_norm_; }
  /// Same kernel with truncation raised (zero padded) or lowered (cut).
  HerglotzKernel resized(int M) const;
  Complex operator()(double theta) const;

 private:
  Eigen::VectorXcd coeffs_;
  double l2_norm_ = 0.0;
};

inline constexpr int kMaxKernelTruncation = 190;

HerglotzKernel operator+(const HerglotzKernel& a, const HerglotzKernel& b);
HerglotzKernel operator*(Complex s, const HerglotzKernel& g);

/// P(x, y) = a Re((x + i y)^N) + b Im((x + i y)^N).
class HomHarmonicPoly {
 public:
  HomHarmonicPoly() = default;
  HomHarmonicPoly(int degree, Complex a, Complex b);

  int degree() const { return degree_; }
  Complex a() const { return a_; }
  Complex b() const { return b_; }
  /// Integral of |P| over the unit circle.
  double norm() const { return norm_; }
  Complex operator()(const Point& x) const;
  /// Value on the unit circle at polar angle theta.
  Complex on_circle(double theta) const;
  HomHarmonicPoly scaled(Complex s) const { return {degree_, s * a_, s * b_}; }

 private:
  int degree_ = 0;
  Complex a_{};
  Complex b_{};
  double norm_ = 0.0;
};

/// Circle L1 norm by the trapezoid rule, for consistency checks.
double circle_norm_quadrature(const HomHarmonicPoly& p, int points = 512);

/// u^i(x) = integral over S^1 of e^{i k theta.x} g(theta), evaluated exactly in
/// the Fourier basis: 2 pi sum_m c_m i^m J_m(k|x|) e^{i m phi_x}.
Eigen::VectorXcd evaluate(const HerglotzKernel& g, double k, const Points& points);
Complex evaluate(const HerglotzKernel& g, double k, const Point& x);

HerglotzKernel normalize(const HerglotzKernel& g);

/// Fourier coefficients of theta -> e^{i k theta.c} g(theta) for |n| <= n_max, index n + n_max.
/// Then u^i(c + r e^{i psi}) = 2 pi sum_n (result)_n i^n J_n(k r) e^{i n psi}.
Eigen::VectorXcd shifted_coefficients(const HerglotzKernel& g, double k, const Point& c, int n_max);

using MultiIndex = std::array<int, 2>;
inline constexpr int kMaxDerivativeOrder = 12;

/// d^gamma u^i(x_c) = integral of (i k theta)^gamma e^{i k theta.x_c} g(theta).
Complex derivative_at(const HerglotzKernel& g, double k, const Point& x_c, MultiIndex gamma);

/// Taylor coefficients d^gamma u(x_c) / gamma! for |gamma| = n, ordered by gamma_2 = 0..n.
Eigen::VectorXcd taylor_coefficients(const HerglotzKernel& g, double k, const Point& x_c, int n);

struct VanishingOrder {
  int order = 0;
  HomHarmonicPoly leading;
  double projection_residual = 0.0;  // non-harmonic part of the degree-N Taylor polynomial
  double max_coefficient = 0.0;
};

inline constexpr double kDefaultOrderTolerance = 1e-8;

/// Smallest N with some |d^gamma u(x_c)| / gamma! > tol * ||g|| at |gamma| = N.
/// Throws DomainError ("order exceeds N_max") if none is found.
VanishingOrder vanishing_order(const HerglotzKernel& g, double k, const Point& x_c,
                               double tol = kDefaultOrderTolerance, int n_max = 10);

/// Kernel with d^gamma u(x_c) = 0 for |gamma| < N whose degree-N Taylor
/// polynomial is extremal among the null space of those constraints.
HerglotzKernel synthesize_vanishing_kernel(double k, const Point& x_c, int N, int M);

/// Orthonormal basis (columns, coefficient space) of kernels vanishing to order N at x_c.
Eigen::MatrixXcd vanishing_null_space(double k, const Point& x_c, int N, int M);

struct KernelFit {
  HerglotzKernel kernel;
  double residual = 0.0;        // ||evaluate(g) - target||_{L2(Omega)}
  double lambda = 0.0;          // regularisation actually used
  double condition_estimate = 0.0;
  bool ill_conditioned = false;  // attached warning when lambda = 0 and the system is singular
};

/// Tikhonov fit of a truncation-M kernel to samples on a quadrature grid.
/// `lambda` < 0 selects the default 1e-10 * max diag of the normal matrix.
KernelFit fit_kernel(const QuadratureGrid& grid, const Eigen::VectorXcd& target, double k, int M,
                     double lambda = -1.0);

/// Constant C with |u^i(x) - T_N(x)| <= C |x - x_c|^{N+1} for |x - x_c| <= 1.
double taylor_remainder_bound(const HerglotzKernel& g, double k, int N);

}  // namespace tlab

#pragma once

#include "tlab/geometry.hpp"
#include "tlab/herglotz.hpp"
#include "tlab/types.hpp"

#include <vector>

namespace tlab {

/// zeta = Re zeta + i Im zeta with |Re zeta| = |Im zeta| = 1, Re zeta orthogonal to Im zeta.
struct AdmissibleZeta {
  CPoint zeta;
  double delta0 = 1.0;
  double angle = 0.0;    // polar angle of Re zeta
  int orientation = 1;   // Im zeta = orientation * perp(Re zeta)

  Point re() const { return zeta.real(); }
  Point im() const { return zeta.imag(); }
};

AdmissibleZeta zeta_from_angle(double angle, int orientation, double delta0);

/// Largest deviation of -Re zeta from the cone axis that keeps Re zeta . x <= -delta0 |x|.
/// Throws DomainError when no direction qualifies.
double admissible_half_arc(const ConeAtVertex& cone, double delta0);

/// max over the cone edges of Re zeta . omega + delta0 (non-positive when admissible).
double admissibility_margin(const AdmissibleZeta& z, const ConeAtVertex& cone);

/// Re zeta = -axis, Im zeta = perp(Re zeta), delta0 = cos(alpha_m + alpha_d).
AdmissibleZeta make_zeta(const ConeAtVertex& cone, double alpha_d);

struct CgoCurve {
  AdmissibleZeta zeta;
  double k = 1.0;
};

/// rho(tau) = tau Re zeta + i sqrt(tau^2 + k^2) Im zeta.
CPoint rho_at(const CgoCurve& curve, double tau);

/// Integral over the cone (apex moved to the origin) of e^{rho.x} P(x).
Complex laplace_transform(const HomHarmonicPoly& P, const ConeAtVertex& cone, const CPoint& rho,
                          double rel_tol = 1e-10);

/// Integral over the positive orthant of R^n of e^{rho.x} x^gamma.
Complex laplace_transform_orthant(const std::vector<int>& gamma, const Eigen::VectorXcd& rho);

/// Quarter-plane transform of a 2D harmonic polynomial through its monomial expansion.
Complex laplace_transform_orthant(const HomHarmonicPoly& P, const CPoint& rho);

/// Coefficients t_j of x^{N-j} y^j in P.
Eigen::VectorXcd monomial_coefficients(const HomHarmonicPoly& P);

struct ZetaChoice {
  AdmissibleZeta zeta;
  double value = 0.0;  // |L P(zeta)|
};

/// Maximizes |L P(zeta)| over admissible zeta: grid over the arc and both orientations,
/// then golden-section refinement around the best grid point.
ZetaChoice best_zeta(const HomHarmonicPoly& P, const ConeAtVertex& cone, double delta0,
                     int grid_size = 32);

struct InfSup {
  double c = 0.0;
  double chi = 0.0;  // minimizing P = (cos chi) Re z^N + e^{i eta} (sin chi) Im z^N, normalized
  double eta = 0.0;
};

/// min over unit-norm P of degree N of max over admissible zeta of |L P(zeta)|.
InfSup infsup_search(int N, const ConeAtVertex& cone, double delta0, int resolution = 12);
double infsup_constant(int N, const ConeAtVertex& cone, double delta0, int resolution = 12);

/// Normalized polynomial of the infsup parametrization.
HomHarmonicPoly infsup_polynomial(int N, double chi, double eta);

/// 4 (N+n)! delta0^{-N-n} k / c.
double tau0(int N, int n, double delta0, double k, double c);

struct DecayUpperReport {
  double lhs = 0.0;  // |L P(zeta)|
  double rhs = 0.0;  // (N+n-1)! delta0^{1-N-n} ||P||
  bool pass = false;
};

DecayUpperReport decay_upper_check(const HomHarmonicPoly& P, const ConeAtVertex& cone, double delta0,
                                   const AdmissibleZeta& zeta, int n = 2);

struct LowerBoundSample {
  double tau = 0.0;
  double lhs = 0.0;            // |L P(rho(tau))|
  double rhs = 0.0;            // (c/4) ||P|| tau^{-(N+n)}
  double deviation = 0.0;      // |L P(zeta) - tau^{N+n} L P(rho(tau))|
  double deviation_bound = 0.0;  // (N+n)! delta0^{-(N+n)} k ||P|| / tau
  bool pass_lower = false;
  bool pass_deviation = false;
};

/// Log-spaced tau in [tau_lo, tau_hi] with `count` samples.
std::vector<LowerBoundSample> lower_bound_sweep(const HomHarmonicPoly& P, const ConeAtVertex& cone,
                                                const CgoCurve& curve, double c, double tau_lo,
                                                double tau_hi, int count, int n = 2);

struct BoundCurve {
  double tau_m = 0.0;
  double min_value = 0.0;
};

/// Minimizer of tau^{-gamma} + tau^{N+n+3} / R and its value.
BoundCurve bound_curve(int script_N, int n, double gamma, double R_value);

}  // namespace tlab

#include "tlab/cone_cgo.hpp"

#include "tlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace tlab {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int j) { return factorial(n) / (factorial(j) * factorial(n - j)); }

Complex int_pow(Complex z, int e) {
  Complex r = 1.0;
  const bool neg = e < 0;
  for (int i = 0; i < std::abs(e); ++i) r *= z;
  return neg ? 1.0 / r : r;
}

double wrap(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

AdmissibleZeta zeta_from_angle(double angle, int orientation, double delta0) {
  AdmissibleZeta z;
  z.angle = angle;
  z.orientation = orientation >= 0 ? 1 : -1;
  z.delta0 = delta0;
  const Point re = polar_point(1.0, angle);
  const Point im = z.orientation * perp(re);
  z.zeta = re.cast<Complex>() + kI * im.cast<Complex>();
  return z;
}

double admissible_half_arc(const ConeAtVertex& cone, double delta0) {
  if (!(delta0 > 0.0 && delta0 <= 1.0)) throw DomainError("admissible arc: delta0 must lie in (0, 1]");
  const double arc = std::acos(delta0) - cone.half_angle;
  if (arc < 0.0) throw DomainError("admissible arc: empty for this cone and delta0");
  return arc;
}

double admissibility_margin(const AdmissibleZeta& z, const ConeAtVertex& cone) {
  double m = -std::numeric_limits<double>::infinity();
  for (const Point& e : cone.edge_dirs) m = std::max(m, z.re().dot(e) + z.delta0);
  return m;
}

AdmissibleZeta make_zeta(const ConeAtVertex& cone, double alpha_d) {
  if (!(alpha_d > 0.0)) throw DomainError("make_zeta: alpha_d must be positive");
  if (!(2.0 * cone.half_angle < kPi)) throw DomainError("make_zeta: cone angle must be below pi");
  if (!(cone.half_angle + alpha_d < kPi / 2.0)) {
    throw DomainError("make_zeta: alpha_m + alpha_d must be below pi/2");
  }
  const Point re = -cone.axis;
  return zeta_from_angle(std::atan2(re.y(), re.x()), 1, std::cos(cone.half_angle + alpha_d));
}

CPoint rho_at(const CgoCurve& curve, double tau) {
  if (!(tau > 0.0)) throw DomainError("rho_at: tau must be positive");
  const double s = std::sqrt(tau * tau + curve.k * curve.k);
  return (tau * curve.zeta.re()).cast<Complex>() + kI * (s * curve.zeta.im()).cast<Complex>();
}

Complex laplace_transform(const HomHarmonicPoly& P, const ConeAtVertex& cone, const CPoint& rho,
                          double rel_tol) {
  const int N = P.degree();
  const double t1 = cone.first_edge_angle();
  const double t2 = t1 + 2.0 * cone.half_angle;
  // Re(rho . omega(t)) = A cos(t - t*): its maximum on [t1, t2] sits at an end or at t*.
  const Point rr = rho.real();
  auto re_dot = [&](double t) { return rr.dot(polar_point(1.0, t)); };
  double worst = std::max(re_dot(t1), re_dot(t2));
  if (rr.norm() > 0.0) {
    const double ts = std::atan2(rr.y(), rr.x());
    const double off = wrap(ts - t1);
    if (off >= 0.0 && off <= t2 - t1) worst = std::max(worst, rr.norm());
  }
  if (!(worst < 0.0)) throw DomainError("laplace_transform: rho is not integrable on the cone");

  const double fac = factorial(N + 1);
  auto integrand = [&](double t) {
    const Point w = polar_point(1.0, t);
    const Complex s = -(rho[0] * w.x() + rho[1] * w.y());
    return P.on_circle(t) * int_pow(s, -(N + 2));
  };
  // Scale for an absolute floor, so cancelling integrands do not exhaust the budget.
  const double scale = quad::gauss([&](double t) { return std::abs(integrand(t)); }, t1, t2, 32);
  const auto r = quad::gauss_kronrod(integrand, t1, t2, rel_tol, 1e-4 * rel_tol * scale);
  return fac * r.value;
}

Complex laplace_transform_orthant(const std::vector<int>& gamma, const Eigen::VectorXcd& rho) {
  if (static_cast<Eigen::Index>(gamma.size()) != rho.size()) {
    throw DimensionError("laplace_transform_orthant: multi-index and rho differ in length");
  }
  Complex v = 1.0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Complex r = rho[static_cast<Eigen::Index>(i)];
    if (!(r.real() < 0.0)) throw DomainError("laplace_transform_orthant: Re rho_i must be negative");
    if (gamma[i] < 0) throw DomainError("laplace_transform_orthant: negative exponent");
    v *= factorial(gamma[i]) * int_pow(-r, -(gamma[i] + 1));
  }
  return v;
}

Eigen::VectorXcd monomial_coefficients(const HomHarmonicPoly& P) {
  const int N = P.degree();
  Eigen::VectorXcd t(N + 1);
  for (int j = 0; j <= N; ++j) {
    const Complex c = binomial(N, j) * int_pow(kI, j);
    t[j] = P.a() * c.real() + P.b() * c.imag();
  }
  return t;
}

Complex laplace_transform_orthant(const HomHarmonicPoly& P, const CPoint& rho) {
  const Eigen::VectorXcd t = monomial_coefficients(P);
  const int N = P.degree();
  Eigen::VectorXcd r(2);
  r << rho[0], rho[1];
  Complex sum{};
  for (int j = 0; j <= N; ++j) sum += t[j] * laplace_transform_orthant({N - j, j}, r);
  return sum;
}

ZetaChoice best_zeta(const HomHarmonicPoly& P, const ConeAtVertex& cone, double delta0, int grid_size) {
  if (!(P.norm() > 0.0)) throw DegenerateInputError("best_zeta: zero polynomial");
  const double arc = admissible_half_arc(cone, delta0);
  const Point minus_axis = -cone.axis;
  const double base = std::atan2(minus_axis.y(), minus_axis.x());
  grid_size = std::max(grid_size, 2);
  auto value = [&](double psi, int orient) {
    const AdmissibleZeta z = zeta_from_angle(base + psi, orient, delta0);
    return std::abs(laplace_transform(P, cone, z.zeta));
  };

  ZetaChoice best;
  double best_psi = 0.0;
  int best_orient = 1;
  const double step = 2.0 * arc / (grid_size - 1);
  for (int orient : {1, -1}) {
    for (int i = 0; i < grid_size; ++i) {
      const double psi = arc > 0.0 ? -arc + i * step : 0.0;
      const double v = value(psi, orient);
      if (v > best.value) {
        best.value = v;
        best_psi = psi;
        best_orient = orient;
      }
      if (arc == 0.0) break;
    }
  }
  if (arc > 0.0) {
    const double lo = std::max(-arc, best_psi - step);
    const double hi = std::min(arc, best_psi + step);
    const auto [psi, neg] =
        quad::golden_minimize([&](double p) { return -value(p, best_orient); }, lo, hi, 1e-10);
    if (-neg > best.value) {
      best.value = -neg;
      best_psi = psi;
    }
  }
  best.zeta = zeta_from_angle(base + best_psi, best_orient, delta0);
  return best;
}

HomHarmonicPoly infsup_polynomial(int N, double chi, double eta) {
  const HomHarmonicPoly p(N, std::cos(chi), std::exp(Complex(0.0, eta)) * std::sin(chi));
  return p.scaled(1.0 / p.norm());
}

InfSup infsup_search(int N, const ConeAtVertex& cone, double delta0, int resolution) {
  if (N < 0 || N > 6) throw DomainError("infsup_constant: degree must lie in [0, 6]");
  resolution = std::max(resolution, 2);
  const int zeta_grid = 24;
  auto f = [&](double chi, double eta) {
    return best_zeta(infsup_polynomial(N, chi, eta), cone, delta0, zeta_grid).value;
  };
  InfSup out;
  if (N == 0) {
    out.c = f(0.0, 0.0);
    return out;
  }
  out.c = std::numeric_limits<double>::infinity();
  const double dchi = 0.5 * kPi / resolution;
  const double deta = 2.0 * kPi / resolution;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const double chi = i * dchi;
      const double eta = j * deta;
      const double v = f(chi, eta);
      if (v < out.c) out = {v, chi, eta};
    }
  }
  // Alternating golden-section refinement in chi and eta.
  double chi_step = dchi;
  double eta_step = deta;
  for (int sweep = 0; sweep < 3; ++sweep) {
    const auto [chi, vc] = quad::golden_minimize([&](double x) { return f(x, out.eta); },
                                                 std::max(0.0, out.chi - chi_step),
                                                 std::min(0.5 * kPi, out.chi + chi_step), 1e-6);
    if (vc < out.c) {
      out.c = vc;
      out.chi = chi;
    }
    const auto [eta, ve] = quad::golden_minimize([&](double x) { return f(out.chi, x); },
                                                 out.eta - eta_step, out.eta + eta_step, 1e-6);
    if (ve < out.c) {
      out.c = ve;
      out.eta = eta;
    }
    chi_step *= 0.5;
    eta_step *= 0.5;
  }
  if (!(out.c > 0.0)) throw DomainError("infsup_constant: non-positive constant");
  return out;
}

double infsup_constant(int N, const ConeAtVertex& cone, double delta0, int resolution) {
  return infsup_search(N, cone, delta0, resolution).c;
}

double tau0(int N, int n, double delta0, double k, double c) {
  if (!(c > 0.0)) throw DomainError("tau0: c must be positive");
  return 4.0 * factorial(N + n) * std::pow(delta0, -(N + n)) * k / c;
}

DecayUpperReport decay_upper_check(const HomHarmonicPoly& P, const ConeAtVertex& cone, double delta0,
                                   const AdmissibleZeta& zeta, int n) {
  DecayUpperReport r;
  const int N = P.degree();
  r.rhs = factorial(N + n - 1) * std::pow(delta0, 1 - N - n) * P.norm();
  r.lhs = P.norm() > 0.0 ? std::abs(laplace_transform(P, cone, zeta.zeta)) : 0.0;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-8);
  return r;
}

std::vector<LowerBoundSample> lower_bound_sweep(const HomHarmonicPoly& P, const ConeAtVertex& cone,
                                                const CgoCurve& curve, double c, double tau_lo,
                                                double tau_hi, int count, int n) {
  const int N = P.degree();
  const double delta0 = curve.zeta.delta0;
  const Complex at_zeta = laplace_transform(P, cone, curve.zeta.zeta);
  std::vector<LowerBoundSample> out;
  for (int i = 0; i < count; ++i) {
    LowerBoundSample s;
    s.tau = count == 1 ? tau_lo : tau_lo * std::pow(tau_hi / tau_lo, static_cast<double>(i) / (count - 1));
    const Complex at_rho = laplace_transform(P, cone, rho_at(curve, s.tau));
    s.lhs = std::abs(at_rho);
    s.rhs = 0.25 * c * P.norm() * std::pow(s.tau, -(N + n));
    s.deviation = std::abs(at_zeta - std::pow(s.tau, N + n) * at_rho);
    s.deviation_bound = factorial(N + n) * std::pow(delta0, -(N + n)) * curve.k * P.norm() / s.tau;
    s.pass_lower = s.lhs >= s.rhs;
    s.pass_deviation = s.deviation <= s.deviation_bound;
    out.push_back(s);
  }
  return out;
}

BoundCurve bound_curve(int script_N, int n, double gamma, double R_value) {
  if (!(R_value > 0.0)) throw DomainError("bound_curve: R must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("bound_curve: gamma must lie in (0, 1]");
  const double e = script_N + n + 3;
  BoundCurve b;
  b.tau_m = std::pow(gamma * R_value / e, 1.0 / (e + gamma));
  b.min_value = std::pow(b.tau_m, -gamma) + std::pow(b.tau_m, e) / R_value;
  return b;
}

}  // namespace tlab

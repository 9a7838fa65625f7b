#include "tlab/cone_cgo.hpp"
#include "tlab/quadrature.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tlab;

namespace {

const ConeAtVertex kQuarter = sector_cone(0.0, kPi / 2);
const double kDelta0 = std::cos(3 * kPi / 8);

double fact(int n) { return std::tgamma(n + 1.0); }

// Radial integral in closed form, angular integral by Gauss-Legendre.
Complex sector_oracle(const HomHarmonicPoly& P, double t0, double t1, const CPoint& rho) {
  const int N = P.degree();
  return quad::gauss([&](double t) {
    const Complex rw = rho[0] * std::cos(t) + rho[1] * std::sin(t);
    return fact(N + 1) * P.on_circle(t) / std::pow(-rw, N + 2);
  }, t0, t1, 200);
}

}  // namespace

TEST(Cone, OrthantProductFormula) {
  Eigen::VectorXcd rho(2);
  rho << Complex(-1.3, 0.4), Complex(-0.7, -2.0);
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      const Complex ref = fact(a) * fact(b) / (std::pow(-rho[0], a + 1) * std::pow(-rho[1], b + 1));
      EXPECT_NEAR(std::abs(laplace_transform_orthant({a, b}, rho) - ref), 0.0, 1e-13 * std::abs(ref));
    }
  }
  Eigen::VectorXcd r3(3);
  r3 << -1.0, Complex(-2.0, 1.0), -0.5;
  EXPECT_NEAR(std::abs(laplace_transform_orthant({0, 1, 2}, r3) - 2.0 / (1.0 * std::pow(Complex(2.0, -1.0), 2) * 0.125)),
              0.0, 1e-13);
}

TEST(Cone, SectorQuadratureMatchesClosedForms) {
  const AdmissibleZeta z = make_zeta(kQuarter, kPi / 8);
  for (int N = 0; N <= 4; ++N) {
    const HomHarmonicPoly P(N, Complex(0.3, -1.0), Complex(1.2, 0.5));
    const Complex quad = laplace_transform(P, kQuarter, z.zeta);
    EXPECT_NEAR(std::abs(quad - laplace_transform_orthant(P, z.zeta)), 0.0, 1e-9 * std::abs(quad)) << N;
  }
  const ConeAtVertex wedge = sector_cone(0.2, 1.3);
  const CPoint rho(Complex(-1.0, 0.3), Complex(-1.0, -0.2));
  const HomHarmonicPoly P(3, 1.0, Complex(0.0, 2.0));
  const Complex ref = sector_oracle(P, 0.2, 1.3, rho);
  EXPECT_NEAR(std::abs(laplace_transform(P, wedge, rho) - ref), 0.0, 1e-9 * std::abs(ref));
  EXPECT_THROW(laplace_transform(P, wedge, CPoint(Complex(1.0), Complex(1.0))), DomainError);
}

TEST(Cone, MonomialCoefficients) {
  const HomHarmonicPoly P(3, Complex(1.0, 0.0), Complex(0.0, 0.0));  // x^3 - 3 x y^2
  const auto t = monomial_coefficients(P);
  ASSERT_EQ(t.size(), 4);
  EXPECT_NEAR(std::abs(t[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t[2] + 3.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t[3]), 0.0, 1e-15);
}

TEST(Cone, ZetaAndCurve) {
  const AdmissibleZeta z = make_zeta(kQuarter, kPi / 8);
  EXPECT_NEAR(z.delta0, kDelta0, 1e-15);
  EXPECT_NEAR(z.re().norm(), 1.0, 1e-15);
  EXPECT_NEAR(z.im().norm(), 1.0, 1e-15);
  EXPECT_NEAR(z.re().dot(z.im()), 0.0, 1e-15);
  EXPECT_LE(admissibility_margin(z, kQuarter), 1e-12);
  EXPECT_NEAR(admissible_half_arc(kQuarter, kDelta0), kPi / 8, 1e-12);
  const CgoCurve curve{z, 1.0};
  for (double tau : {0.5, 3.0, 40.0}) {
    const CPoint r = rho_at(curve, tau);
    EXPECT_NEAR(std::abs(r[0] * r[0] + r[1] * r[1] + 1.0), 0.0, 1e-12 * tau * tau);
    // Re rho stays inside the dual cone: Re rho . x <= -delta0 tau |x|.
    for (double t : {0.0, kPi / 4, kPi / 2}) {
      EXPECT_LE(r.real().dot(polar_point(1.0, t)), -kDelta0 * tau + 1e-12);
    }
  }
  EXPECT_THROW(make_zeta(kQuarter, kPi / 4), DomainError);
}

TEST(Cone, InfsupConstantOfConstants) {
  // For N = 0 on the quarter plane, |L1(zeta)| = 1 / |zeta_1 zeta_2| = 1 for every unit zeta, so c = 1 / (2 pi).
  EXPECT_NEAR(infsup_constant(0, kQuarter, kDelta0), 1.0 / (2 * kPi), 1e-9);
  const InfSup s = infsup_search(2, kQuarter, kDelta0);
  EXPECT_GT(s.c, 0.0);
  const HomHarmonicPoly P = infsup_polynomial(2, s.chi, s.eta);
  EXPECT_NEAR(P.norm(), 1.0, 1e-12);
  EXPECT_NEAR(best_zeta(P, kQuarter, kDelta0).value, s.c, 1e-3 * s.c);
}

TEST(Cone, InfsupIsStableUnderRefinement) {
  for (int N = 1; N <= 3; ++N) {
    const double c12 = infsup_constant(N, kQuarter, kDelta0, 12);
    const double c24 = infsup_constant(N, kQuarter, kDelta0, 24);
    EXPECT_NEAR(c12, c24, 1e-3 * c24) << N;
  }
}

TEST(Cone, SweepBoundsHold) {
  std::mt19937 rng(11);
  std::normal_distribution<double> n;
  for (int N = 0; N <= 3; ++N) {
    const double c = infsup_constant(N, kQuarter, kDelta0);
    const double t0 = tau0(N, 2, kDelta0, 1.0, c);
    EXPECT_NEAR(t0, 4 * fact(N + 2) * std::pow(kDelta0, -N - 2) / c, 1e-9 * t0);
    for (int s = 0; s < 4; ++s) {
      const HomHarmonicPoly P(N, Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
      const ZetaChoice best = best_zeta(P, kQuarter, kDelta0);
      EXPECT_GE(best.value, c * P.norm() * (1 - 1e-6));
      for (const auto& x : lower_bound_sweep(P, kQuarter, CgoCurve{best.zeta, 1.0}, c, t0, 100 * t0, 6)) {
        EXPECT_TRUE(x.pass_lower) << N << " tau=" << x.tau;
        EXPECT_TRUE(x.pass_deviation) << N << " tau=" << x.tau;
      }
      EXPECT_TRUE(decay_upper_check(P, kQuarter, kDelta0, best.zeta).pass);
    }
  }
  EXPECT_THROW(tau0(1, 2, kDelta0, 1.0, 0.0), DomainError);
}

TEST(Cone, BoundCurveMinimum) {
  for (int N : {0, 2}) {
    for (double R : {1.0, 1e4, 1e8}) {
      const BoundCurve b = bound_curve(N, 2, 1.0, R);
      auto f = [&](double t) { return 1.0 / t + std::pow(t, N + 5) / R; };
      EXPECT_NEAR(b.min_value, f(b.tau_m), 1e-12 * b.min_value);
      EXPECT_LE(b.min_value, f(b.tau_m * 1.01));
      EXPECT_LE(b.min_value, f(b.tau_m * 0.99));
    }
  }
  EXPECT_THROW(bound_curve(1, 2, 1.0, 0.0), DomainError);
}

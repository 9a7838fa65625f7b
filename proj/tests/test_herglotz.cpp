#include "tlab/config.hpp"
#include "tlab/herglotz.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tlab;

namespace {

HerglotzKernel random_kernel(int M, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  Eigen::VectorXcd c(2 * M + 1);
  for (int m = -M; m <= M; ++m) c[m + M] = Complex(n(rng), n(rng)) / (1.0 + std::abs(m));
  return HerglotzKernel(c);
}

// Trapezoid rule over the circle: exponentially accurate for the periodic integrand.
Complex herglotz_by_quadrature(const HerglotzKernel& g, double k, const Point& x, int n = 512) {
  Complex s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * kPi * i / n;
    s += std::exp(kI * k * (std::cos(t) * x.x() + std::sin(t) * x.y())) * g(t);
  }
  return s * (2 * kPi / n);
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST(Herglotz, KernelNormAndAlgebra) {
  const HerglotzKernel g = random_kernel(6, 1);
  double q = 0.0;
  for (int i = 0; i < 256; ++i) q += std::norm(g(2 * kPi * i / 256));
  EXPECT_NEAR(g.l2_norm(), std::sqrt(q * 2 * kPi / 256), 1e-12);
  EXPECT_NEAR(normalize(g).l2_norm(), 1.0, 1e-14);
  const HerglotzKernel h = g.resized(9);
  EXPECT_EQ(h.truncation(), 9);
  EXPECT_EQ(h.coeff(9), Complex(0.0));
  EXPECT_EQ(h.coeff(-3), g.coeff(-3));
  const HerglotzKernel s = g + Complex(2.0) * g;
  EXPECT_NEAR(s.l2_norm(), 3 * g.l2_norm(), 1e-12);
  EXPECT_THROW(normalize(HerglotzKernel::zero(3)), DegenerateInputError);
  EXPECT_THROW(HerglotzKernel(Eigen::VectorXcd::Zero(4)), DimensionError);
}

TEST(Herglotz, EvaluateMatchesQuadrature) {
  const HerglotzKernel g = random_kernel(8, 2);
  for (double k : {1.0, 3.0, 10.0}) {
    for (const Point& x : {Point(0, 0), Point(0.3, -0.7), Point(-1.5, 0.4), Point(2.0, 1.0)}) {
      const Complex ref = herglotz_by_quadrature(g, k, x);
      EXPECT_NEAR(std::abs(evaluate(g, k, x) - ref), 0.0, 1e-11) << k;
    }
  }
}

TEST(Herglotz, SingleModeIsBesselMode) {
  const double k = 2.5;
  const HerglotzKernel g = HerglotzKernel::single_mode(5, 3, 1.0);
  const Point x(0.4, 0.9);
  const double r = x.norm(), phi = std::atan2(x.y(), x.x());
  const Complex ref = 2 * kPi * std::pow(kI, 3) * std::cyl_bessel_j(3, k * r) * std::exp(kI * (3 * phi));
  EXPECT_NEAR(std::abs(evaluate(g, k, x) - ref), 0.0, 1e-13);
}

TEST(Herglotz, ShiftedCoefficientsReproduceField) {
  const HerglotzKernel g = random_kernel(5, 3);
  const double k = 4.0;
  const Point c(0.3, -0.2);
  const int n_max = 40;
  const Eigen::VectorXcd s = shifted_coefficients(g, k, c, n_max);
  for (double psi : {0.0, 1.1, 4.0}) {
    const double r = 0.6;
    Complex u = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
      u += 2 * kPi * s[n + n_max] * std::pow(kI, n) * std::cyl_bessel_j(std::abs(n), k * r) *
           (n < 0 && n % 2 ? -1.0 : 1.0) * std::exp(kI * (n * psi));
    }
    EXPECT_NEAR(std::abs(u - evaluate(g, k, Point(c + polar_point(r, psi)))), 0.0, 1e-11);
  }
}

TEST(Herglotz, DerivativesMatchFiniteDifferences) {
  const HerglotzKernel g = random_kernel(4, 4);
  const double k = 2.0, d = 1e-4;
  const Point x(0.2, 0.1);
  auto u = [&](double dx, double dy) { return evaluate(g, k, Point(x + Point(dx, dy))); };
  EXPECT_NEAR(std::abs(derivative_at(g, k, x, {0, 0}) - u(0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(derivative_at(g, k, x, {1, 0}) - (u(d, 0) - u(-d, 0)) / (2 * d)), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(derivative_at(g, k, x, {0, 1}) - (u(0, d) - u(0, -d)) / (2 * d)), 0.0, 1e-6);
  const Complex dxy = (u(d, d) - u(d, -d) - u(-d, d) + u(-d, -d)) / (4 * d * d);
  EXPECT_NEAR(std::abs(derivative_at(g, k, x, {1, 1}) - dxy), 0.0, 1e-5);
  const Eigen::VectorXcd t = taylor_coefficients(g, k, x, 3);
  ASSERT_EQ(t.size(), 4);
  for (int j = 0; j <= 3; ++j) {
    const Complex ref = derivative_at(g, k, x, {3 - j, j}) / (factorial(3 - j) * factorial(j));
    EXPECT_NEAR(std::abs(t[j] - ref), 0.0, 1e-11);
  }
  EXPECT_THROW(derivative_at(g, k, x, {kMaxDerivativeOrder, 1}), DomainError);
}

TEST(Herglotz, HarmonicPolynomialNorm) {
  // Integral of |cos(N t)| over the circle is 4 for every N >= 1.
  for (int N = 1; N <= 6; ++N) EXPECT_NEAR(HomHarmonicPoly(N, 1.0, 0.0).norm(), 4.0, 1e-12);
  EXPECT_NEAR(HomHarmonicPoly(0, 2.0, 0.0).norm(), 4 * kPi, 1e-12);
  const HomHarmonicPoly p(3, Complex(1.0, 0.5), Complex(-0.3, 2.0));
  EXPECT_NEAR(p.norm(), circle_norm_quadrature(p, 4096), 1e-6);
  EXPECT_NEAR(std::abs(p(Point(0.6, 0.8)) - p.on_circle(std::atan2(0.8, 0.6))), 0.0, 1e-14);
  const Point z(0.3, -0.4);
  const Complex zn = std::pow(Complex(z.x(), z.y()), 3);
  EXPECT_NEAR(std::abs(p(z) - (p.a() * zn.real() + p.b() * zn.imag())), 0.0, 1e-15);
}

TEST(Herglotz, VanishingOrderOfBesselMode) {
  // 2 pi i^m J_m(k r) e^{i m phi} ~ 2 pi i^m (k/2)^m / m! z^m at the origin.
  const double k = 3.0;
  for (int m = 0; m <= 4; ++m) {
    const auto vo = vanishing_order(HerglotzKernel::single_mode(8, m, 1.0), k, Point::Zero());
    EXPECT_EQ(vo.order, m);
    const Complex a = 2 * kPi * std::pow(kI, m) * std::pow(k / 2, m) / factorial(m);
    EXPECT_NEAR(std::abs(vo.leading.a() - a), 0.0, 1e-9 * std::abs(a));
    if (m > 0) EXPECT_NEAR(std::abs(vo.leading.b() - kI * a), 0.0, 1e-9 * std::abs(a));
    EXPECT_LT(vo.projection_residual, 1e-9);
  }
}

TEST(Herglotz, SynthesizedKernelsHaveExactOrder) {
  const double k = 3.0;
  const Point xc(-0.5, -0.5);
  for (int N = 0; N <= 4; ++N) {
    const HerglotzKernel g = synthesize_vanishing_kernel(k, xc, N, 16);
    EXPECT_NEAR(g.l2_norm(), 1.0, 1e-12);
    const auto vo = vanishing_order(g, k, xc);
    EXPECT_EQ(vo.order, N);
    EXPECT_GT(vo.leading.norm(), 0.0);
    for (int n = 0; n < N; ++n) EXPECT_LT(taylor_coefficients(g, k, xc, n).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Herglotz, SynthesisMaximizesLeadingPolynomial) {
  const double k = 3.0;
  const Point xc(-0.5, -0.5);
  const int N = 2, M = 12;
  const double best = vanishing_order(synthesize_vanishing_kernel(k, xc, N, M), k, xc).leading.norm();
  const Eigen::MatrixXcd Z = vanishing_null_space(k, xc, N, M);
  std::mt19937 rng(5);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd w(Z.cols());
    for (auto& x : w) x = Complex(n(rng), n(rng));
    const HerglotzKernel g = normalize(HerglotzKernel(Z * w));
    EXPECT_LE(vanishing_order(g, k, xc).leading.norm(), best * (1 + 1e-9));
  }
}

TEST(Herglotz, NullSpaceDimensions) {
  const double k = 2.0;
  const Point xc(0.1, 0.2);
  for (int N = 1; N <= 4; ++N) {
    const Eigen::MatrixXcd Z = vanishing_null_space(k, xc, N, 10);
    EXPECT_EQ(Z.cols(), 21 - (2 * N - 1));
    EXPECT_NEAR((Z.adjoint() * Z - Eigen::MatrixXcd::Identity(Z.cols(), Z.cols())).norm(), 0.0, 1e-12);
  }
  EXPECT_EQ(vanishing_null_space(k, xc, 0, 3).cols(), 7);
  EXPECT_THROW(vanishing_null_space(k, xc, 4, 2), DimensionError);
}

TEST(Herglotz, TaylorRemainderBoundHolds) {
  const HerglotzKernel g = normalize(random_kernel(6, 7));
  const double k = 2.0;
  const Point xc(0.1, -0.3);
  for (int N = 0; N <= 3; ++N) {
    const double C = taylor_remainder_bound(g, k, N);
    std::vector<Eigen::VectorXcd> t;
    for (int n = 0; n <= N; ++n) t.push_back(taylor_coefficients(g, k, xc, n));
    for (double r : {0.05, 0.2, 0.7}) {
      for (double psi : {0.3, 2.0, 5.0}) {
        const Point d = polar_point(r, psi);
        Complex T = 0.0;
        for (int n = 0; n <= N; ++n) {
          for (int j = 0; j <= n; ++j) T += t[n][j] * std::pow(d.x(), n - j) * std::pow(d.y(), j);
        }
        EXPECT_LE(std::abs(evaluate(g, k, Point(xc + d)) - T), C * std::pow(r, N + 1));
      }
    }
  }
}

TEST(Herglotz, FitRecoversKernel) {
  const double k = 3.0;
  const HerglotzKernel g = random_kernel(6, 8);
  const QuadratureGrid grid = build_grid(unit_square(), 0.05);
  const Eigen::VectorXcd target = evaluate(g, k, grid.nodes);
  const KernelFit fit = fit_kernel(grid, target, k, 6, 0.0);
  EXPECT_LT(fit.residual / l2_norm(grid, target), 1e-6);
  const KernelFit reg = fit_kernel(grid, target, k, 6);
  EXPECT_GT(reg.lambda, 0.0);
  EXPECT_LT(reg.residual / l2_norm(grid, target), 1e-3);
  EXPECT_THROW(fit_kernel(grid, target.head(3), k, 6), DimensionError);
}

#include "tlab/config.hpp"
#include "tlab/quadrature.hpp"
#include "tlab/scattering.hpp"

#include <gtest/gtest.h>

using namespace tlab;

namespace {

const Complex kFarFieldConstant = std::exp(kI * kPi / 4.0) / std::sqrt(8.0 * kPi);

// Born far field of the centered unit square for a plane wave: the volume integral factorizes.
Complex born_square(double eps, double k, const Point& d, double theta) {
  const Point q = k * (d - Point(std::cos(theta), std::sin(theta)));
  auto f = [](double s) { return std::abs(s) < 1e-12 ? 1.0 : 2.0 * std::sin(s / 2.0) / s; };
  return kFarFieldConstant / std::sqrt(k) * k * k * eps * f(q.x()) * f(q.y());
}

PotentialSpec square_spec(double V) { return {unit_square(), Contrast::constant_value(V)}; }

}  // namespace

TEST(Scattering, FundamentalSolution) {
  for (double r : {0.01, 0.5, 3.0, 60.0}) {
    const Complex ref = 0.25 * kI * Complex(std::cyl_bessel_j(0, 2.0 * r), std::cyl_neumann(0, 2.0 * r));
    EXPECT_NEAR(std::abs(fundamental_solution(2.0, Point(r, 0.0)) - ref), 0.0, 1e-12);
  }
  EXPECT_THROW(fundamental_solution(1.0, Point::Zero()), DomainError);
}

TEST(Scattering, ZeroContrastGivesZeroField) {
  const auto grid = build_grid(unit_square(), 0.1);
  const auto ui = IncidentField::plane_wave(Point(1, 0), 2.0);
  const auto res = solve_total_field(square_spec(0.0), ui, 2.0, grid);
  EXPECT_EQ(res.diagnostics.method, "trivial");
  EXPECT_EQ(res.scattered().norm(), 0.0);
  const PotentialSpec zero{unit_square(), Contrast::function("zero", [](const Point&) { return Complex(0.0); })};
  const auto r2 = solve_total_field(zero, ui, 2.0, grid);
  EXPECT_LT(r2.scattered().norm(), 1e-14);
  EXPECT_LT(far_field(zero, r2).l2_norm, 1e-14);
}

TEST(Scattering, BornLimitMatchesClosedForm) {
  const double k = 2.0, eps = 1e-3;
  const Point d(1, 0);
  const auto grid = build_grid(unit_square(), 0.05);
  const auto spec = square_spec(eps);
  const auto res = solve_total_field(spec, IncidentField::plane_wave(d, k), k, grid);
  const auto ff = far_field(spec, res, 64);
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < ff.values.size(); ++i) {
    const Complex b = born_square(eps, k, d, ff.directions[i]);
    num += std::norm(ff.values[i] - b);
    den += std::norm(b);
  }
  EXPECT_LT(std::sqrt(num / den), 5e-3);
}

TEST(Scattering, Reciprocity) {
  const double k = 2.0;
  const auto grid = build_grid(unit_square(), 0.05);
  const auto spec = square_spec(1.0);
  const double a = 0.3, b = 2.0;
  const auto r1 = solve_total_field(spec, IncidentField::plane_wave(Point(std::cos(a), std::sin(a)), k), k, grid);
  const auto r2 = solve_total_field(spec, IncidentField::plane_wave(Point(-std::cos(b), -std::sin(b)), k), k, grid);
  const Complex u12 = far_field_at(r1, b);
  const Complex u21 = far_field_at(r2, a + kPi);
  EXPECT_LT(std::abs(u12 - u21), 1e-4 * std::abs(u12));
}

TEST(Scattering, FarFieldMatchesNearField) {
  const double k = 3.0;
  const auto grid = build_grid(unit_square(), 0.05);
  const auto spec = square_spec(1.0);
  const auto res = solve_total_field(spec, IncidentField::plane_wave(Point(1, 0), k), k, grid);
  for (double R : {200.0 / k, 400.0 / k}) {
    Points pts;
    Eigen::VectorXcd ff(16);
    for (int i = 0; i < 16; ++i) {
      const double t = 2 * kPi * i / 16;
      pts.push_back(polar_point(R, t));
      ff[i] = far_field_at(res, t) * std::exp(kI * k * R) / std::sqrt(R);
    }
    const auto near = scattered_field_at(spec, res, pts);
    EXPECT_EQ(near.inside_count, 0u);
    EXPECT_LT((near.values - ff).norm() / ff.norm(), 0.02) << R;
  }
}

TEST(Scattering, ModalDiskAgreesWithVolumeSolver) {
  const double k = 3.0;
  const DiskDomain disk{Point(0.1, 0.0), 0.8};
  const PotentialSpec spec{disk, Contrast::constant_value(1.0)};
  const auto ui = IncidentField::plane_wave(Point(0.6, 0.8), k);
  const auto grid = build_grid(disk, 0.025);
  const auto modal = solve_total_field(spec, ui, k, grid);
  ASSERT_EQ(modal.diagnostics.method, "modal");
  SolverOptions vol;
  vol.modal_disk = false;
  const auto volume = solve_total_field(spec, ui, k, grid, vol);
  const auto f1 = far_field(spec, modal), f2 = far_field(spec, volume);
  EXPECT_LT((f1.values - f2.values).norm() / f1.values.norm(), 5e-3);
  // Exact scattering solution is continuous across the boundary.
  const Point in = disk.center + polar_point(disk.radius * (1 - 1e-9), 0.7);
  const Point out = disk.center + polar_point(disk.radius * (1 + 1e-9), 0.7);
  const auto s = scattered_field_at(spec, modal, {in, out});
  EXPECT_NEAR(std::abs(s.values[0] - s.values[1]), 0.0, 1e-6);
}

TEST(Scattering, IncidentCoefficients) {
  const double k = 2.5;
  const Point d(std::cos(0.4), std::sin(0.4));
  const auto pw = IncidentField::plane_wave(d, k);
  const auto smp = IncidentField::from_sampler([&](const Point& x) { return std::exp(kI * k * d.dot(x)); }, k);
  const Point c(0.2, -0.1);
  const int n = 20;
  const auto a = pw.cylindrical_coeffs(c, 1.0, n);
  const auto b = smp.cylindrical_coeffs(c, 1.0, n);
  EXPECT_LT((a - b).segment(n - 8, 17).norm(), 1e-8 * a.norm());
  Complex u = 0.0;
  const double r = 0.7, psi = 1.3;
  for (int m = -n; m <= n; ++m) {
    u += a[m + n] * std::cyl_bessel_j(std::abs(m), k * r) * (m < 0 && m % 2 ? -1.0 : 1.0) * std::exp(kI * (m * psi));
  }
  EXPECT_NEAR(std::abs(u - pw(Point(c + polar_point(r, psi)))), 0.0, 1e-10);
  Complex us = 0.0;
  for (int m = -n; m <= n; ++m) {
    us += b[m + n] * std::cyl_bessel_j(std::abs(m), k * r) * (m < 0 && m % 2 ? -1.0 : 1.0) * std::exp(kI * (m * psi));
  }
  EXPECT_NEAR(std::abs(us - u), 0.0, 1e-10);
}

TEST(Scattering, VariableContrastAndMatrixFreePath) {
  const double k = 2.0;
  const PotentialSpec spec{unit_square(), Contrast::function("gauss", [](const Point& p) {
                             return Complex(1.0 + 0.5 * std::exp(-p.squaredNorm() / 0.25));
                           })};
  const auto grid = build_grid(unit_square(), 0.05);
  const auto ui = IncidentField::plane_wave(Point(0, 1), k);
  const auto dense = solve_total_field(spec, ui, k, grid);
  EXPECT_LT(dense.diagnostics.residual, 1e-8);
  SolverOptions mf;
  mf.dense_cap = 100;
  const auto free = solve_total_field(spec, ui, k, grid, mf);
  EXPECT_EQ(free.diagnostics.method, "gmres");
  EXPECT_LT((free.total - dense.total).norm() / dense.total.norm(), 1e-7);
  EXPECT_THROW(far_field(spec, dense, 32), DimensionError);
}

TEST(Scattering, SelfCellIntegralMatchesPolarQuadrature) {
  const double k = 3.0;
  const auto grid = build_grid(unit_square(), 0.1);
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if ((grid.nodes[i] - Point(0.05, 0.05)).norm() < 1e-12) i0 = i;
  }
  const double h2 = 0.05;
  // Integrate Phi over the square cell in polar coordinates about its center.
  Complex ref = 0.0;
  for (int q = 0; q < 8; ++q) {
    ref += tlab::quad::gauss([&](double t) {
      const double rho = h2 / std::max(std::abs(std::cos(t)), std::abs(std::sin(t)));
      return tlab::quad::gauss([&](double r) {
        return r * 0.25 * kI * Complex(std::cyl_bessel_j(0, k * r), std::cyl_neumann(0, k * r));
      }, 0.0, rho, 200);
    }, q * kPi / 4, (q + 1) * kPi / 4, 40);
  }
  EXPECT_NEAR(std::abs(self_cell_integral(unit_square(), grid, i0, k) - ref), 0.0, 1e-6 * std::abs(ref));
}

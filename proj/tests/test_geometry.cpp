#include "tlab/config.hpp"
#include "tlab/geometry.hpp"

#include <gtest/gtest.h>

using namespace tlab;

TEST(Geometry, PolygonBasics) {
  const PolygonDomain sq = unit_square();
  EXPECT_NEAR(sq.area(), 1.0, 1e-15);
  EXPECT_NEAR(sq.diameter(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(sq.centroid().norm(), 0.0, 1e-15);
  EXPECT_TRUE(sq.is_strictly_convex());
  EXPECT_TRUE(contains(sq, Point(0.49, -0.49)));
  EXPECT_FALSE(contains(sq, Point(0.51, 0.0)));
}

TEST(Geometry, RejectsInvalidPolygons) {
  EXPECT_THROW(PolygonDomain::from_vertices({Point(0, 0), Point(1, 0)}), GeometryError);
  // clockwise
  EXPECT_THROW(PolygonDomain::from_vertices({Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0)}), GeometryError);
  // reflex vertex
  EXPECT_THROW(PolygonDomain::from_vertices({Point(0, 0), Point(2, 0), Point(1, 0.5), Point(2, 2), Point(0, 2)}),
               GeometryError);
  // collinear vertex
  EXPECT_THROW(PolygonDomain::from_vertices({Point(0, 0), Point(1, 0), Point(2, 0), Point(1, 1)}), GeometryError);
}

TEST(Geometry, CornerCones) {
  const PolygonDomain sq = unit_square();
  for (std::size_t i = 0; i < 4; ++i) {
    const ConeAtVertex c = cone_at_vertex(sq, i);
    EXPECT_NEAR(c.half_angle, kPi / 4, 1e-14);
    EXPECT_NEAR((c.apex + 0.1 * c.axis).norm(), (c.apex.norm() - 0.1), 1e-14);
  }
  const PolygonDomain tri = PolygonDomain::from_vertices({Point(0, 0), Point(1, 0), Point(0.5, std::sqrt(3.0) / 2)});
  EXPECT_NEAR(cone_at_vertex(tri, 1).half_angle, kPi / 6, 1e-14);
  EXPECT_NEAR(min_vertex_edge_distance(tri), std::sqrt(3.0) / 2, 1e-14);
}

TEST(Geometry, GridWeightsSumToArea) {
  const QuadratureGrid g = build_grid(unit_square(), 0.1);
  EXPECT_EQ(g.size(), 100u);
  EXPECT_NEAR(g.total_weight(), 1.0, 1e-14);
  const DiskDomain disk{Point(0.3, -0.2), 0.7};
  const QuadratureGrid gd = build_grid(disk, 0.05);
  EXPECT_NEAR(gd.total_weight(), disk.area(), 1e-12);
  Eigen::VectorXd x2(gd.size());
  for (std::size_t i = 0; i < gd.size(); ++i) x2[i] = (gd.nodes[i] - disk.center).squaredNorm();
  EXPECT_NEAR(integrate(gd, x2), kPi * std::pow(0.7, 4) / 2, 2e-3);
  EXPECT_THROW(build_grid(unit_square(), 1e-4, 1000), ResourceError);
}

TEST(Geometry, BallAverageUsesZeroExtension) {
  const Domain sq = unit_square();
  const FieldSampler one = [](const Point&) { return Complex(1.0); };
  EXPECT_NEAR(ball_average(one, sq, Point(0, 0), 0.2).value, 1.0, 1e-12);
  EXPECT_NEAR(ball_average(one, sq, Point(-0.5, -0.5), 0.2).value, 0.25, 1e-12);
  EXPECT_NEAR(ball_average(one, sq, Point(0.0, -0.5), 0.2).value, 0.5, 1e-12);
  // |x - c|^2 averaged over a full disk of radius r: r^2 / 2.
  const Point c(0.1, 0.05);
  const FieldSampler q = [&](const Point& p) { return Complex((p - c).squaredNorm()); };
  EXPECT_NEAR(ball_average(q, sq, c, 0.3).value, 0.045, 1e-12);
  EXPECT_THROW(ball_average(one, sq, c, 0.0), DomainError);
}

TEST(Geometry, Admissibility) {
  const PotentialSpec ok{unit_square(), Contrast::constant_value(1.0)};
  const auto rep = check_admissibility(ok);
  EXPECT_TRUE(rep.admissible);
  EXPECT_EQ(rep.witness_vertices.size(), 4u);

  const PotentialSpec vanishing{unit_square(), Contrast::function("x+y+1", [](const Point& p) {
                                  return Complex(p.x() + p.y() + 1.0);
                                })};
  const auto rv = check_admissibility(vanishing);
  EXPECT_EQ(std::count(rv.witness_vertices.begin(), rv.witness_vertices.end(), 0u), 0);
  EXPECT_EQ(rv.witness_vertices.size(), 3u);

  const PotentialSpec disk{DiskDomain{}, Contrast::constant_value(1.0)};
  EXPECT_FALSE(check_admissibility(disk).admissible);
  const PotentialSpec big{unit_square().scaled(20.0), Contrast::constant_value(1.0)};
  EXPECT_FALSE(check_admissibility(big).admissible);
}

#pragma once

#include "tlab/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tlab {

/// Convex polygon with counter-clockwise vertices.
///
/// `from_vertices` validates (>= 3 vertices, strictly convex, ccw) and throws
/// GeometryError otherwise; `unchecked` keeps arbitrary input so that the
/// admissibility report can diagnose it.
class PolygonDomain {
 public:
  static PolygonDomain from_vertices(Points vertices);
  static PolygonDomain unchecked(Points vertices);

  const Points& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  double diameter() const { return diameter_; }
  double area() const;
  Point centroid() const;
  bool is_strictly_convex() const;

  /// Scale about the origin.
  PolygonDomain scaled(double s) const;

 private:
  explicit PolygonDomain(Points vertices);
  Points vertices_;
  double diameter_ = 0.0;
};

struct DiskDomain {
  Point center = Point::Zero();
  double radius = 1.0;

  double diameter() const { return 2.0 * radius; }
  double area() const { return kPi * radius * radius; }
};

using Domain = std::variant<PolygonDomain, DiskDomain>;

double area(const Domain& d);
double diameter(const Domain& d);
bool contains(const Domain& d, const Point& p, double tol = 0.0);
/// Axis-aligned bounding box as (min, max).
std::pair<Point, Point> bounding_box(const Domain& d);
/// Parameter interval {t : p + t * dir in closure(d)}; empty when lo > hi.
std::pair<double, double> ray_interval(const Domain& d, const Point& p, const Point& dir);
std::string describe(const Domain& d);

/// Corner cone of a convex polygon at one vertex.
struct ConeAtVertex {
  Point apex;
  std::array<Point, 2> edge_dirs;  // unit vectors along the two incident edges
  double half_angle = 0.0;          // alpha_m
  Point axis;                       // unit bisector pointing into the polygon

  /// Unit direction at the given angle offset from the first edge (0 .. 2*half_angle).
  double first_edge_angle() const;
};

ConeAtVertex cone_at_vertex(const PolygonDomain& domain, std::size_t vertex_index);
/// Cone with apex at the origin spanning polar angles [theta_lo, theta_hi].
ConeAtVertex sector_cone(double theta_lo, double theta_hi);

/// Minimal distance from any vertex to any non-adjacent edge.
double min_vertex_edge_distance(const PolygonDomain& domain);

/// Contrast function phi, with an optional constant fast path.
struct Contrast {
  std::function<Complex(const Point&)> eval;
  std::optional<Complex> constant;
  std::string name;

  static Contrast constant_value(Complex value);
  static Contrast function(std::string name, std::function<Complex(const Point&)> f);

  Complex operator()(const Point& p) const { return constant ? *constant : eval(p); }
  bool is_zero() const { return constant && *constant == Complex(0.0); }
};

/// V = chi_Omega * phi.
struct PotentialSpec {
  Domain domain;
  Contrast contrast;
  double hoelder_alpha = 1.0;

  Complex potential(const Point& p) const {
    return contains(domain, p, 1e-12) ? contrast(p) : Complex(0.0);
  }
};

struct AdmissibilityCondition {
  int index = 0;  // 1..4, in the order of the admissibility definition
  std::string description;
  bool pass = false;
  std::string detail;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCondition> conditions;
  std::vector<std::size_t> witness_vertices;  // vertices with phi(x_c) != 0
  bool admissible = false;
};

/// Radius of the domain-of-interest ball B_R; domains must fit inside it.
inline constexpr double kDomainOfInterestRadius = 5.0;

AdmissibilityReport check_admissibility(const PotentialSpec& spec,
                                        double ball_radius = kDomainOfInterestRadius);

/// Lattice cell that produced a grid node (before clipping to the domain).
struct GridCell {
  double x0, x1, y0, y1;
  bool full;  // cell lies entirely inside the domain
};

struct QuadratureGrid {
  Points nodes;
  Eigen::VectorXd weights;
  std::vector<GridCell> cells;
  double h = 0.0;   // max cell side
  double hx = 0.0;
  double hy = 0.0;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const { return weights.sum(); }
};

inline constexpr std::size_t kDefaultMaxGridNodes = 200'000;

/// Axis-aligned lattice clipped to the domain; nodes at clipped-cell centroids
/// with exact clipped areas as weights.
QuadratureGrid build_grid(const Domain& domain, double target_h,
                          std::size_t max_nodes = kDefaultMaxGridNodes);

/// Integral over the grid of a sampled function.
template <typename Derived>
auto integrate(const QuadratureGrid& grid, const Eigen::MatrixBase<Derived>& samples) {
  return (grid.weights.cast<typename Derived::Scalar>().array() * samples.array()).sum();
}

/// L2(Omega) norm of samples on the grid.
template <typename Derived>
double l2_norm(const QuadratureGrid& grid, const Eigen::MatrixBase<Derived>& samples) {
  return std::sqrt((grid.weights.array() * samples.array().abs2()).sum());
}

using FieldSampler = std::function<Complex(const Point&)>;

struct BallAverage {
  double value = 0.0;
  bool radius_warning = false;  // r exceeds the distance to the non-adjacent sides
};

/// (1 / |B(center, r)|) * integral over B(center, r) of |v|, with v extended by
/// zero outside the domain.
BallAverage ball_average(const FieldSampler& field, const Domain& domain, const Point& center,
                         double radius, int angular_order = 24, int radial_order = 24);

}  // namespace tlab

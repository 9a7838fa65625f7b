#include "tlab/geometry.hpp"

#include "tlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tlab {
namespace {

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Clip a convex polygon by the half-plane {x : n.x <= c}.
Points clip_half_plane(const Points& poly, const Point& n, double c) {
  Points out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % m];
    const double da = n.dot(a) - c;
    const double db = n.dot(b) - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

struct Moments {
  double area = 0.0;
  Point first = Point::Zero();  // integral of x over the region
};

Moments polygon_moments(const Points& poly) {
  Moments m;
  const std::size_t n = poly.size();
  if (n < 3) return m;
  double a2 = 0.0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  m.area = 0.5 * a2;
  m.first = c / 6.0;
  return m;
}

// Exact area and first moments of {|X| <= R disk} intersected with the
// rectangle [x0, x1] x [y0, y1], in disk-centred coordinates.
Moments disk_rect_moments(double R, double x0, double x1, double y0, double y1) {
  Moments m;
  const double lo_x = std::max(x0, -R);
  const double hi_x = std::min(x1, R);
  if (lo_x >= hi_x) return m;

  std::vector<double> breaks{lo_x, hi_x};
  for (double y : {y0, y1}) {
    if (std::abs(y) < R) {
      const double xb = std::sqrt(R * R - y * y);
      for (double x : {-xb, xb}) {
        if (x > lo_x && x < hi_x) breaks.push_back(x);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());

  auto s_of = [R](double x) { return std::sqrt(std::max(0.0, R * R - x * x)); };
  // Antiderivatives of s, x*s and s^2.
  auto S = [&](double x) {
    const double u = std::clamp(x / R, -1.0, 1.0);
    return 0.5 * (x * s_of(x) + R * R * std::asin(u));
  };
  auto T = [&](double x) {
    const double s = s_of(x);
    return -s * s * s / 3.0;
  };
  auto U = [&](double x) { return R * R * x - x * x * x / 3.0; };

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double p = breaks[i];
    const double q = breaks[i + 1];
    if (q - p <= 0.0) continue;
    const double mid = 0.5 * (p + q);
    const double sm = s_of(mid);
    const bool hi_is_s = sm < y1;
    const bool lo_is_s = -sm > y0;
    const double hi_m = hi_is_s ? sm : y1;
    const double lo_m = lo_is_s ? -sm : y0;
    if (hi_m <= lo_m) continue;

    const double int_hi = hi_is_s ? S(q) - S(p) : y1 * (q - p);
    const double int_lo = lo_is_s ? -(S(q) - S(p)) : y0 * (q - p);
    const double xint_hi = hi_is_s ? T(q) - T(p) : 0.5 * y1 * (q * q - p * p);
    const double xint_lo = lo_is_s ? -(T(q) - T(p)) : 0.5 * y0 * (q * q - p * p);
    const double sq_hi = hi_is_s ? U(q) - U(p) : y1 * y1 * (q - p);
    const double sq_lo = lo_is_s ? U(q) - U(p) : y0 * y0 * (q - p);

    m.area += int_hi - int_lo;
    m.first.x() += xint_hi - xint_lo;
    m.first.y() += 0.5 * (sq_hi - sq_lo);
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------- polygon

PolygonDomain::PolygonDomain(Points vertices) : vertices_(std::move(vertices)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      diameter_ = std::max(diameter_, (vertices_[i] - vertices_[j]).norm());
    }
  }
}

PolygonDomain PolygonDomain::unchecked(Points vertices) { return PolygonDomain(std::move(vertices)); }

PolygonDomain PolygonDomain::from_vertices(Points vertices) {
  PolygonDomain p(std::move(vertices));
  if (p.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
  if (!p.is_strictly_convex()) {
    throw GeometryError("polygon must be strictly convex with counter-clockwise vertices");
  }
  return p;
}

bool PolygonDomain::is_strictly_convex() const {
  const std::size_t n = size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point e1 = vertex(i + 1) - vertex(i);
    const Point e2 = vertex(i + 2) - vertex(i + 1);
    if (cross(e1, e2) <= 1e-14 * e1.norm() * e2.norm()) return false;
  }
  // Total turning must be exactly one revolution (rules out star polygons).
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point e1 = vertex(i + 1) - vertex(i);
    const Point e2 = vertex(i + 2) - vertex(i + 1);
    turning += std::atan2(cross(e1, e2), e1.dot(e2));
  }
  return std::abs(turning - 2.0 * kPi) < 1e-9;
}

double PolygonDomain::area() const { return polygon_moments(vertices_).area; }

Point PolygonDomain::centroid() const {
  const auto m = polygon_moments(vertices_);
  return m.first / m.area;
}

PolygonDomain PolygonDomain::scaled(double s) const {
  Points v = vertices_;
  for (auto& p : v) p *= s;
  return from_vertices(std::move(v));
}

// ---------------------------------------------------------------- domain helpers

double area(const Domain& d) {
  return std::visit([](const auto& x) { return x.area(); }, d);
}

double diameter(const Domain& d) {
  return std::visit([](const auto& x) { return x.diameter(); }, d);
}

bool contains(const Domain& d, const Point& p, double tol) {
  return std::visit(Overloaded{
                        [&](const PolygonDomain& poly) {
                          const std::size_t n = poly.size();
                          for (std::size_t i = 0; i < n; ++i) {
                            const Point e = poly.vertex(i + 1) - poly.vertex(i);
                            if (cross(e, p - poly.vertex(i)) < -tol * e.norm()) return false;
                          }
                          return true;
                        },
                        [&](const DiskDomain& disk) {
                          return (p - disk.center).norm() <= disk.radius + tol;
                        }},
                    d);
}

std::pair<Point, Point> bounding_box(const Domain& d) {
  return std::visit(Overloaded{[](const PolygonDomain& poly) {
                                 Point lo = poly.vertex(0);
                                 Point hi = lo;
                                 for (const auto& v : poly.vertices()) {
                                   lo = lo.cwiseMin(v);
                                   hi = hi.cwiseMax(v);
                                 }
                                 return std::pair{lo, hi};
                               },
                               [](const DiskDomain& disk) {
                                 const Point r(disk.radius, disk.radius);
                                 return std::pair<Point, Point>{disk.center - r, disk.center + r};
                               }},
                    d);
}

std::pair<double, double> ray_interval(const Domain& d, const Point& p, const Point& dir) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{[&](const PolygonDomain& poly) {
                   double lo = -inf;
                   double hi = inf;
                   const std::size_t n = poly.size();
                   for (std::size_t i = 0; i < n; ++i) {
                     const Point e = poly.vertex(i + 1) - poly.vertex(i);
                     const Point outward = Point(e.y(), -e.x()).normalized();
                     // outward.(p + t dir - v_i) <= 0
                     const double a = outward.dot(dir);
                     const double b = outward.dot(p - poly.vertex(i));
                     if (std::abs(a) < 1e-300) {
                       if (b > 1e-13) return std::pair{1.0, 0.0};
                       continue;
                     }
                     const double t = -b / a;
                     if (a > 0) hi = std::min(hi, t);
                     else lo = std::max(lo, t);
                   }
                   return std::pair{lo, hi};
                 },
                 [&](const DiskDomain& disk) {
                   const Point q = p - disk.center;
                   const double b = q.dot(dir);
                   const double c = q.squaredNorm() - disk.radius * disk.radius;
                   const double disc = b * b - c;
                   if (disc < 0.0) return std::pair{1.0, 0.0};
                   const double s = std::sqrt(disc);
                   return std::pair{-b - s, -b + s};
                 }},
      d);
}

std::string describe(const Domain& d) {
  std::ostringstream os;
  std::visit(Overloaded{[&](const PolygonDomain& poly) {
                          os << "polygon[" << poly.size() << "]";
                        },
                        [&](const DiskDomain& disk) {
                          os << "disk(center=(" << disk.center.x() << "," << disk.center.y()
                             << "), r=" << disk.radius << ")";
                        }},
             d);
  return os.str();
}

// ---------------------------------------------------------------- cones

double ConeAtVertex::first_edge_angle() const {
  return std::atan2(edge_dirs[0].y(), edge_dirs[0].x());
}

ConeAtVertex cone_at_vertex(const PolygonDomain& domain, std::size_t vertex_index) {
  const std::size_t n = domain.size();
  if (vertex_index >= n) throw GeometryError("cone_at_vertex: vertex index out of range");
  const Point& c = domain.vertex(vertex_index);
  const Point next = (domain.vertex(vertex_index + 1) - c).normalized();
  const Point prev = (domain.vertex(vertex_index + n - 1) - c).normalized();
  const double s = cross(next, prev);
  if (s <= 0.0) throw GeometryError("cone_at_vertex: reflex or straight interior angle");
  ConeAtVertex cone;
  cone.apex = c;
  cone.edge_dirs = {next, prev};
  cone.half_angle = 0.5 * std::atan2(s, next.dot(prev));
  cone.axis = (next + prev).normalized();
  return cone;
}

ConeAtVertex sector_cone(double theta_lo, double theta_hi) {
  if (!(theta_hi > theta_lo) || theta_hi - theta_lo >= kPi) {
    throw GeometryError("sector_cone: opening must lie in (0, pi)");
  }
  ConeAtVertex cone;
  cone.apex = Point::Zero();
  cone.edge_dirs = {polar_point(1.0, theta_lo), polar_point(1.0, theta_hi)};
  cone.half_angle = 0.5 * (theta_hi - theta_lo);
  cone.axis = polar_point(1.0, 0.5 * (theta_lo + theta_hi));
  return cone;
}

double min_vertex_edge_distance(const PolygonDomain& domain) {
  const std::size_t n = domain.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Edge j joins vertex j and j+1.
      if (j == i || (j + 1) % n == i) continue;
      best = std::min(best, point_segment_distance(domain.vertex(i), domain.vertex(j),
                                                   domain.vertex(j + 1)));
    }
  }
  return best;
}

// ---------------------------------------------------------------- contrast / admissibility

Contrast Contrast::constant_value(Complex value) {
  Contrast c;
  c.constant = value;
  c.eval = [value](const Point&) { return value; };
  std::ostringstream os;
  os << "constant(" << value.real();
  if (value.imag() != 0.0) os << (value.imag() > 0 ? "+" : "") << value.imag() << "i";
  os << ")";
  c.name = os.str();
  return c;
}

Contrast Contrast::function(std::string name, std::function<Complex(const Point&)> f) {
  Contrast c;
  c.eval = std::move(f);
  c.name = std::move(name);
  return c;
}

AdmissibilityReport check_admissibility(const PotentialSpec& spec, double ball_radius) {
  AdmissibilityReport report;
  const auto* poly = std::get_if<PolygonDomain>(&spec.domain);

  AdmissibilityCondition c1{1, "V = chi_Omega * phi with phi bounded", true, ""};
  {
    // Sample phi on a coarse lattice over the bounding box.
    const auto [lo, hi] = bounding_box(spec.domain);
    for (int i = 0; i <= 16 && c1.pass; ++i) {
      for (int j = 0; j <= 16; ++j) {
        const Point p(lo.x() + (hi.x() - lo.x()) * i / 16.0, lo.y() + (hi.y() - lo.y()) * j / 16.0);
        const Complex v = spec.contrast(p);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          c1.pass = false;
          c1.detail = "phi not finite on the domain";
          break;
        }
      }
    }
  }
  report.conditions.push_back(c1);

  AdmissibilityCondition c2{2, "Omega is an open convex polygon inside B_R", false, ""};
  if (!poly) {
    c2.detail = "domain is not a polygon";
  } else if (poly->size() < 3) {
    c2.detail = "fewer than 3 vertices";
  } else if (!poly->is_strictly_convex()) {
    c2.detail = "polygon is not strictly convex (or not counter-clockwise)";
  } else {
    double rmax = 0.0;
    for (const auto& v : poly->vertices()) rmax = std::max(rmax, v.norm());
    c2.pass = rmax < ball_radius;
    if (!c2.pass) c2.detail = "polygon leaves the domain-of-interest ball";
  }
  report.conditions.push_back(c2);

  AdmissibilityCondition c3{3, "phi is Hoelder continuous with alpha > 0",
                            spec.hoelder_alpha > 0.0, ""};
  if (!c3.pass) c3.detail = "hoelder_alpha must be positive";
  report.conditions.push_back(c3);

  AdmissibilityCondition c4{4, "phi != 0 at some vertex", false, ""};
  if (poly) {
    for (std::size_t i = 0; i < poly->size(); ++i) {
      if (std::abs(spec.contrast(poly->vertex(i))) > 1e-12) report.witness_vertices.push_back(i);
    }
    c4.pass = !report.witness_vertices.empty();
    c4.detail = std::to_string(report.witness_vertices.size()) + " witness vertices";
  } else {
    c4.detail = "domain has no vertices";
  }
  report.conditions.push_back(c4);

  report.admissible = std::all_of(report.conditions.begin(), report.conditions.end(),
                                  [](const auto& c) { return c.pass; });
  return report;
}

// ---------------------------------------------------------------- grid

QuadratureGrid build_grid(const Domain& domain, double target_h, std::size_t max_nodes) {
  const double diam = diameter(domain);
  if (!(target_h > 0.0) || target_h >= diam) {
    throw DomainError("build_grid: target_h must be positive and below the domain diameter");
  }
  const auto [lo, hi] = bounding_box(domain);
  const int nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / target_h - 1e-12));
  const int ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / target_h - 1e-12));
  if (static_cast<double>(nx) * ny > 4.0 * static_cast<double>(max_nodes)) {
    throw ResourceError("build_grid: node count exceeds the configured cap");
  }
  QuadratureGrid grid;
  grid.hx = (hi.x() - lo.x()) / nx;
  grid.hy = (hi.y() - lo.y()) / ny;
  grid.h = std::max(grid.hx, grid.hy);
  std::vector<double> weights;
  const double cell_area = grid.hx * grid.hy;

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      GridCell cell{lo.x() + i * grid.hx, lo.x() + (i + 1) * grid.hx, lo.y() + j * grid.hy,
                    lo.y() + (j + 1) * grid.hy, false};
      const Points corners{Point(cell.x0, cell.y0), Point(cell.x1, cell.y0),
                           Point(cell.x1, cell.y1), Point(cell.x0, cell.y1)};
      bool all_in = true;
      for (const auto& c : corners) all_in = all_in && contains(domain, c, 0.0);

      Moments m;
      if (all_in) {
        m.area = cell_area;
        m.first = m.area * Point(0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1));
        cell.full = true;
      } else if (const auto* poly = std::get_if<PolygonDomain>(&domain)) {
        Points clipped = corners;
        for (std::size_t e = 0; e < poly->size() && !clipped.empty(); ++e) {
          const Point edge = poly->vertex(e + 1) - poly->vertex(e);
          const Point outward = Point(edge.y(), -edge.x()).normalized();
          clipped = clip_half_plane(clipped, outward, outward.dot(poly->vertex(e)));
        }
        m = polygon_moments(clipped);
      } else {
        const auto& disk = std::get<DiskDomain>(domain);
        const Point c = disk.center;
        m = disk_rect_moments(disk.radius, cell.x0 - c.x(), cell.x1 - c.x(), cell.y0 - c.y(),
                              cell.y1 - c.y());
        m.first += m.area * c;
      }
      if (m.area <= 1e-13 * cell_area) continue;
      grid.nodes.push_back(m.first / m.area);
      weights.push_back(m.area);
      grid.cells.push_back(cell);
      if (grid.nodes.size() > max_nodes) {
        throw ResourceError("build_grid: node count exceeds the configured cap");
      }
    }
  }
  grid.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return grid;
}

// ---------------------------------------------------------------- ball average

BallAverage ball_average(const FieldSampler& field, const Domain& domain, const Point& center,
                         double radius, int angular_order, int radial_order) {
  if (!(radius > 0.0)) throw DomainError("ball_average: radius must be positive");
  BallAverage out;

  // Angular breakpoints: vertex directions and circle/boundary crossings.
  std::vector<double> breaks{0.0, 2.0 * kPi};
  auto add_angle = [&](const Point& d) {
    if (d.norm() < 1e-14) return;
    double a = std::atan2(d.y(), d.x());
    if (a < 0) a += 2.0 * kPi;
    breaks.push_back(a);
  };
  std::visit(Overloaded{[&](const PolygonDomain& poly) {
                          double opposite = std::numeric_limits<double>::infinity();
                          for (std::size_t i = 0; i < poly.size(); ++i) {
                            const Point a = poly.vertex(i);
                            const Point b = poly.vertex(i + 1);
                            add_angle(a - center);
                            const double dist = point_segment_distance(center, a, b);
                            if (dist > 1e-12) opposite = std::min(opposite, dist);
                            // Intersections of the circle with segment ab.
                            const Point ab = b - a;
                            const Point ac = a - center;
                            const double qa = ab.squaredNorm();
                            const double qb = 2.0 * ac.dot(ab);
                            const double qc = ac.squaredNorm() - radius * radius;
                            const double disc = qb * qb - 4.0 * qa * qc;
                            if (disc > 0.0) {
                              for (double sgn : {-1.0, 1.0}) {
                                const double t = (-qb + sgn * std::sqrt(disc)) / (2.0 * qa);
                                if (t > 0.0 && t < 1.0) add_angle(a + t * ab - center);
                              }
                            }
                          }
                          out.radius_warning = radius > opposite;
                        },
                        [&](const DiskDomain& disk) {
                          const Point dc = disk.center - center;
                          const double d = dc.norm();
                          if (d > 1e-14) {
                            // circle-circle intersection angles
                            const double cosv =
                                (radius * radius + d * d - disk.radius * disk.radius) /
                                (2.0 * radius * d);
                            if (std::abs(cosv) < 1.0) {
                              const double base = std::atan2(dc.y(), dc.x());
                              const double off = std::acos(cosv);
                              add_angle(polar_point(1.0, base + off));
                              add_angle(polar_point(1.0, base - off));
                            }
                          }
                          out.radius_warning = radius > disk.radius;
                        }},
             domain);
  std::sort(breaks.begin(), breaks.end());

  const auto& ar = quad::gauss_legendre(angular_order);
  const auto& rr = quad::gauss_legendre(radial_order);
  double total = 0.0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double t0 = breaks[b];
    const double t1 = breaks[b + 1];
    if (t1 - t0 < 1e-15) continue;
    const double half_t = 0.5 * (t1 - t0);
    const double mid_t = 0.5 * (t1 + t0);
    for (std::size_t a = 0; a < ar.nodes.size(); ++a) {
      const double theta = mid_t + half_t * ar.nodes[a];
      const Point dir = polar_point(1.0, theta);
      auto [lo, hi] = ray_interval(domain, center, dir);
      lo = std::max(lo, 0.0);
      hi = std::min(hi, radius);
      if (hi <= lo) continue;
      const double half_r = 0.5 * (hi - lo);
      const double mid_r = 0.5 * (hi + lo);
      double radial = 0.0;
      for (std::size_t r = 0; r < rr.nodes.size(); ++r) {
        const double t = mid_r + half_r * rr.nodes[r];
        radial += rr.weights[r] * std::abs(field(center + t * dir)) * t;
      }
      total += ar.weights[a] * half_t * radial * half_r;
    }
  }
  out.value = total / (kPi * radius * radius);
  return out;
}

}  // namespace tlab

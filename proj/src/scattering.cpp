#include "tlab/scattering.hpp"

#include "tlab/parallel.hpp"
#include "tlab/quadrature.hpp"
#include "tlab/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace tlab {
namespace {

constexpr double kSelfPanelOrder = 16;

Complex phi_from_distance(double k, double r) { return 0.25 * kI * specfun::hankel1_01(k * r).h0; }

double signed_j(int n, const std::vector<double>& j) {
  const int a = std::abs(n);
  return (n < 0 && a % 2 == 1) ? -j[a] : j[a];
}

Complex signed_h(int n, const std::vector<double>& j, const std::vector<double>& y) {
  const int a = std::abs(n);
  const Complex h(j[a], y[a]);
  return (n < 0 && a % 2 == 1) ? -h : h;
}

double rect_exit(const GridCell& c, const Point& p, const Point& d) {
  double t = std::numeric_limits<double>::infinity();
  if (d.x() > 0) t = std::min(t, (c.x1 - p.x()) / d.x());
  if (d.x() < 0) t = std::min(t, (c.x0 - p.x()) / d.x());
  if (d.y() > 0) t = std::min(t, (c.y1 - p.y()) / d.y());
  if (d.y() < 0) t = std::min(t, (c.y0 - p.y()) / d.y());
  return t;
}

bool in_rect(const GridCell& c, const Point& q, double eps) {
  return q.x() >= c.x0 - eps && q.x() <= c.x1 + eps && q.y() >= c.y0 - eps && q.y() <= c.y1 + eps;
}

// Points on the boundary of (cell intersect domain) where the boundary is not smooth.
Points cell_corner_points(const Domain& domain, const GridCell& c) {
  Points pts = {Point(c.x0, c.y0), Point(c.x1, c.y0), Point(c.x1, c.y1), Point(c.x0, c.y1)};
  if (c.full) return pts;
  const double eps = 1e-12 * std::max(c.x1 - c.x0, c.y1 - c.y0);
  const std::array<std::pair<Point, Point>, 4> sides = {
      std::pair{pts[0], pts[1]}, std::pair{pts[1], pts[2]}, std::pair{pts[2], pts[3]},
      std::pair{pts[3], pts[0]}};
  if (const auto* poly = std::get_if<PolygonDomain>(&domain)) {
    const std::size_t n = poly->size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = poly->vertex(i);
      const Point& b = poly->vertex(i + 1);
      if (in_rect(c, a, eps)) pts.push_back(a);
      for (const auto& [p, q] : sides) {
        const Point r = b - a;
        const Point s = q - p;
        const double den = cross(r, s);
        if (std::abs(den) < 1e-300) continue;
        const double t = cross(p - a, s) / den;
        const double u = cross(p - a, r) / den;
        if (t >= -1e-12 && t <= 1 + 1e-12 && u >= -1e-12 && u <= 1 + 1e-12) pts.push_back(a + t * r);
      }
    }
  } else {
    const auto& disk = std::get<DiskDomain>(domain);
    const double R = disk.radius;
    const Point& o = disk.center;
    for (double x : {c.x0, c.x1}) {
      const double dx = x - o.x();
      if (std::abs(dx) > R) continue;
      const double s = std::sqrt(R * R - dx * dx);
      for (double y : {o.y() - s, o.y() + s}) {
        if (y >= c.y0 - eps && y <= c.y1 + eps) pts.emplace_back(x, y);
      }
    }
    for (double y : {c.y0, c.y1}) {
      const double dy = y - o.y();
      if (std::abs(dy) > R) continue;
      const double s = std::sqrt(R * R - dy * dy);
      for (double x : {o.x() - s, o.x() + s}) {
        if (x >= c.x0 - eps && x <= c.x1 + eps) pts.emplace_back(x, y);
      }
    }
  }
  return pts;
}

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
struct GmresOutcome {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

template <typename Apply>
GmresOutcome gmres(const Apply& apply, const Eigen::VectorXcd& b, Eigen::VectorXcd& x, double tol,
                   int restart, int max_iterations) {
  GmresOutcome out;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    out.converged = true;
    return out;
  }
  const Eigen::Index n = b.size();
  const int m = std::max(1, std::min<int>(restart, static_cast<int>(n)));
  Eigen::MatrixXcd V(n, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  Eigen::VectorXcd cs(m);
  Eigen::VectorXcd sn(m);
  Eigen::VectorXcd g(m + 1);

  while (true) {
    Eigen::VectorXcd r = b - apply(x);
    const double beta = r.norm();
    out.residual = beta / bnorm;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    if (out.iterations >= max_iterations) return out;
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    H.setZero();
    int j = 0;
    for (; j < m && out.iterations < max_iterations; ++j) {
      Eigen::VectorXcd w = apply(V.col(j));
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const Complex h = V.col(i).dot(w);
          H(i, j) += h;
          w -= h * V.col(i);
        }
      }
      H(j + 1, j) = w.norm();
      if (std::abs(H(j + 1, j)) > 0.0) V.col(j + 1) = w / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const Complex a = H(i, j);
        const Complex c = H(i + 1, j);
        H(i, j) = cs[i] * a + sn[i] * c;
        H(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * c;
      }
      const Complex a = H(j, j);
      const Complex c = H(j + 1, j);
      const double rr = std::hypot(std::abs(a), std::abs(c));
      if (std::abs(a) == 0.0) {
        cs[j] = 0.0;
        sn[j] = 1.0;
      } else {
        cs[j] = std::abs(a) / rr;
        sn[j] = (a / std::abs(a)) * std::conj(c) / rr;
      }
      H(j, j) = cs[j] * a + sn[j] * c;
      H(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];
      ++out.iterations;
      if (std::abs(g[j + 1]) / bnorm <= 0.5 * tol) {
        ++j;
        break;
      }
    }
    const Eigen::VectorXcd y =
        H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += V.leftCols(j) * y;
  }
}

std::optional<double> modal_index(const PotentialSpec& spec, const SolverOptions& options) {
  if (!options.modal_disk || !std::holds_alternative<DiskDomain>(spec.domain)) return std::nullopt;
  if (!spec.contrast.constant) return std::nullopt;
  const Complex v = *spec.contrast.constant;
  if (v.imag() != 0.0 || !(1.0 + v.real() > 0.0)) return std::nullopt;
  return std::sqrt(1.0 + v.real());
}

ModalSolution solve_modal(const DiskDomain& disk, double n_ref, const IncidentField& u_i, double k) {
  ModalSolution s;
  s.center = disk.center;
  s.radius = disk.radius;
  s.n_ref = n_ref;
  const double kappa = k * n_ref;
  int n_max = static_cast<int>(std::ceil(std::max(k, kappa) * disk.radius)) + 30;
  if (u_i.kernel()) n_max = std::min(n_max, specfun::kMaxOrder - u_i.kernel()->truncation());
  n_max = std::min(n_max, 150);
  s.n_max = n_max;
  s.incident = u_i.cylindrical_coeffs(disk.center, disk.radius, n_max);
  s.inside = Eigen::VectorXcd::Zero(2 * n_max + 1);
  s.outgoing = Eigen::VectorXcd::Zero(2 * n_max + 1);
  const double x = k * disk.radius;
  const double y = kappa * disk.radius;
  const auto jx = specfun::bessel_j_sequence(n_max + 1, x);
  const auto yx = specfun::bessel_y_sequence(n_max + 1, x);
  const auto jy = specfun::bessel_j_sequence(n_max + 1, y);
  for (int m = 0; m <= n_max; ++m) {
    // Derivatives via Z_m' = Z_{m-1} - (m/x) Z_m, with Z_{-1} = -Z_1.
    auto prime = [m](const std::vector<double>& z, double arg) {
      const double prev = m == 0 ? -z[1] : z[m - 1];
      return prev - m / arg * z[m];
    };
    const double J = jx[m];
    const double Jp = prime(jx, x);
    const Complex H(jx[m], yx[m]);
    const Complex Hp(Jp, prime(yx, x));
    const double Jk = jy[m];
    const double Jkp = prime(jy, y);
    const Complex den = kappa * Jkp * H - k * Hp * Jk;
    const Complex beta = (k * Jp * Jk - kappa * Jkp * J) / den;
    const Complex alpha = k * (Jp * H - J * Hp) / den;
    if (!std::isfinite(std::abs(beta)) || !std::isfinite(std::abs(alpha))) continue;
    for (int n : {m, -m}) {
      s.outgoing[n + n_max] = beta * s.incident[n + n_max];
      s.inside[n + n_max] = alpha * s.incident[n + n_max];
      if (m == 0) break;
    }
  }
  return s;
}

Complex modal_inside(const ModalSolution& s, const Point& p, double k) {
  const Point d = p - s.center;
  const double r = d.norm();
  const auto j = specfun::bessel_j_sequence(s.n_max, k * s.n_ref * r);
  const Complex e1 = r > 0 ? Complex(d.x(), d.y()) / r : Complex(1.0);
  Complex sum = s.inside[s.n_max] * j[0];
  Complex ep = 1.0;
  for (int n = 1; n <= s.n_max; ++n) {
    ep *= e1;
    sum += s.inside[s.n_max + n] * signed_j(n, j) * ep + s.inside[s.n_max - n] * signed_j(-n, j) * std::conj(ep);
  }
  return sum;
}

Complex modal_outgoing(const ModalSolution& s, const Point& p, double k) {
  const Point d = p - s.center;
  const double r = d.norm();
  const auto j = specfun::bessel_j_sequence(s.n_max, k * r);
  const auto y = specfun::bessel_y_sequence(s.n_max, k * r);
  const Complex e1 = Complex(d.x(), d.y()) / r;
  Complex sum = s.outgoing[s.n_max] * signed_h(0, j, y);
  Complex ep = 1.0;
  for (int n = 1; n <= s.n_max; ++n) {
    ep *= e1;
    const Complex hp = signed_h(n, j, y);
    const Complex hm = signed_h(-n, j, y);
    if (s.outgoing[s.n_max + n] != 0.0) sum += s.outgoing[s.n_max + n] * hp * ep;
    if (s.outgoing[s.n_max - n] != 0.0) sum += s.outgoing[s.n_max - n] * hm * std::conj(ep);
  }
  return sum;
}

Eigen::VectorXcd potential_on(const PotentialSpec& spec, const QuadratureGrid& grid) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) v[static_cast<Eigen::Index>(i)] = spec.contrast(grid.nodes[i]);
  return v;
}

}  // namespace

Complex fundamental_solution(double k, const Point& x) {
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("fundamental_solution: singular at x = 0");
  if (!(k > 0.0)) throw DomainError("fundamental_solution: wavenumber must be positive");
  return phi_from_distance(k, r);
}

// ---------------------------------------------------------------- incident fields

IncidentField IncidentField::herglotz(HerglotzKernel g, double k) {
  if (!(k > 0.0)) throw DomainError("IncidentField: wavenumber must be positive");
  IncidentField f;
  f.k_ = k;
  f.name_ = "herglotz";
  f.kernel_ = std::move(g);
  const HerglotzKernel kern = *f.kernel_;
  f.f_ = [kern, k](const Point& x) { return evaluate(kern, k, x); };
  return f;
}

IncidentField IncidentField::plane_wave(const Point& direction, double k) {
  if (!(k > 0.0)) throw DomainError("IncidentField: wavenumber must be positive");
  if (!(direction.norm() > 0.0)) throw DomainError("IncidentField: zero direction");
  IncidentField f;
  f.k_ = k;
  f.name_ = "plane_wave";
  const Point d = direction.normalized();
  f.direction_ = d;
  f.f_ = [d, k](const Point& x) { return std::exp(Complex(0.0, k * d.dot(x))); };
  return f;
}

IncidentField IncidentField::from_sampler(FieldSampler fn, double k, std::string name) {
  if (!(k > 0.0)) throw DomainError("IncidentField: wavenumber must be positive");
  IncidentField f;
  f.k_ = k;
  f.name_ = std::move(name);
  f.f_ = std::move(fn);
  return f;
}

Complex IncidentField::operator()(const Point& x) const { return f_(x); }

Eigen::VectorXcd IncidentField::sample(const Points& x) const {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(x.size()));
  parallel_for(x.size(), [&](std::size_t i) { out[static_cast<Eigen::Index>(i)] = f_(x[i]); });
  return out;
}

Eigen::VectorXcd IncidentField::cylindrical_coeffs(const Point& c, double radius, int n_max) const {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(2 * n_max + 1);
  if (kernel_) {
    const Eigen::VectorXcd gs = shifted_coefficients(*kernel_, k_, c, n_max);
    for (int n = -n_max; n <= n_max; ++n) {
      a[n + n_max] = 2.0 * kPi * std::pow(kI, n) * gs[n + n_max];
    }
    return a;
  }
  if (direction_) {
    const double phi = std::atan2(direction_->y(), direction_->x());
    const Complex shift = std::exp(Complex(0.0, k_ * direction_->dot(c)));
    for (int n = -n_max; n <= n_max; ++n) {
      a[n + n_max] = shift * std::pow(kI, n) * std::exp(Complex(0.0, -n * phi));
    }
    return a;
  }
  // Least squares over several circles: u_n(r) = a_n J_n(k r).
  const int L = std::max(64, 4 * (n_max + 1));
  const std::array<double, 4> fractions = {0.4, 0.6, 0.8, 1.0};
  Eigen::VectorXcd num = Eigen::VectorXcd::Zero(2 * n_max + 1);
  Eigen::VectorXd den = Eigen::VectorXd::Zero(2 * n_max + 1);
  for (double f : fractions) {
    const double r = f * radius;
    Eigen::VectorXcd samples(L);
    for (int l = 0; l < L; ++l) samples[l] = f_(c + polar_point(r, 2.0 * kPi * l / L));
    const auto j = specfun::bessel_j_sequence(n_max, k_ * r);
    for (int n = -n_max; n <= n_max; ++n) {
      Complex un{};
      for (int l = 0; l < L; ++l) un += samples[l] * std::exp(Complex(0.0, -2.0 * kPi * n * l / L));
      un /= static_cast<double>(L);
      const double jn = signed_j(n, j);
      num[n + n_max] += jn * un;
      den[n + n_max] += jn * jn;
    }
  }
  // Orders with J_n negligible on every circle are not recoverable from samples; they stay zero.
  for (int n = -n_max; n <= n_max; ++n) {
    if (den[n + n_max] > 1e-24) a[n + n_max] = num[n + n_max] / den[n + n_max];
  }
  return a;
}

// ---------------------------------------------------------------- self cell

Complex self_cell_integral(const Domain& domain, const QuadratureGrid& grid, std::size_t i, double k) {
  const Point& p = grid.nodes[i];
  const GridCell& cell = grid.cells[i];
  std::vector<double> angles;
  for (const Point& q : cell_corner_points(domain, cell)) {
    const Point d = q - p;
    if (d.norm() > 1e-14) angles.push_back(std::atan2(d.y(), d.x()));
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               angles.end());
  angles.push_back(angles.front() + 2.0 * kPi);

  const auto& rule = quad::gauss_legendre(static_cast<int>(kSelfPanelOrder));
  const Complex offset = 2.0 * kI / (kPi * k * k);
  Complex sum{};
  for (std::size_t b = 0; b + 1 < angles.size(); ++b) {
    const double lo = angles[b];
    const double hi = angles[b + 1];
    if (hi - lo < 1e-15) continue;
    const double half = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = lo + half * (rule.nodes[q] + 1.0);
      const Point dir(std::cos(t), std::sin(t));
      double rho = rect_exit(cell, p, dir);
      if (!cell.full) rho = std::min(rho, ray_interval(domain, p, dir).second);
      const Complex h1 = specfun::hankel1_01(k * rho).h1;
      sum += half * rule.weights[q] * (rho * h1 / k + offset);
    }
  }
  return 0.25 * kI * sum;
}

// ---------------------------------------------------------------- solver

ScatterResult solve_total_field(const PotentialSpec& spec, const IncidentField& u_i, double k,
                                const QuadratureGrid& grid, const SolverOptions& options) {
  if (!(k > 0.0)) throw DomainError("solve_total_field: wavenumber must be positive");
  if (grid.size() == 0) throw DimensionError("solve_total_field: empty grid");
  ScatterResult res;
  res.grid = grid;
  res.k = k;
  res.potential = potential_on(spec, grid);
  res.incident = u_i.sample(grid.nodes);

  if (spec.contrast.is_zero() || res.potential.cwiseAbs().maxCoeff() == 0.0) {
    res.total = res.incident;
    res.diagnostics.method = "trivial";
    return res;
  }

  if (const auto n_ref = modal_index(spec, options)) {
    res.modal = solve_modal(std::get<DiskDomain>(spec.domain), *n_ref, u_i, k);
    res.total.resize(res.incident.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      res.total[static_cast<Eigen::Index>(i)] = modal_inside(*res.modal, grid.nodes[i], k);
    });
    res.diagnostics.method = "modal";
    return res;
  }

  const std::size_t n = grid.size();
  const Eigen::Index N = static_cast<Eigen::Index>(n);
  const double k2 = k * k;

  // Self-cell integrals: every full cell shares one value.
  Eigen::VectorXcd self(N);
  std::optional<Complex> full_value;
  for (std::size_t i = 0; i < n; ++i) {
    if (grid.cells[i].full) {
      if (!full_value) full_value = self_cell_integral(spec.domain, grid, i, k);
      self[static_cast<Eigen::Index>(i)] = *full_value;
    }
  }
  parallel_for(n, [&](std::size_t i) {
    if (!grid.cells[i].full) self[static_cast<Eigen::Index>(i)] = self_cell_integral(spec.domain, grid, i, k);
  });

  const Eigen::VectorXcd wv = grid.weights.cast<Complex>().cwiseProduct(res.potential);
  Eigen::VectorXcd x = res.incident;

  if (n <= options.dense_cap) {
    Eigen::MatrixXcd A(N, N);
    parallel_for(n, [&](std::size_t ju) {
      const Eigen::Index j = static_cast<Eigen::Index>(ju);
      for (Eigen::Index i = 0; i < N; ++i) {
        if (i == j) {
          A(i, j) = 1.0 - k2 * self[i] * res.potential[i];
        } else {
          const double r = (grid.nodes[static_cast<std::size_t>(i)] - grid.nodes[ju]).norm();
          A(i, j) = -k2 * phi_from_distance(k, r) * wv[j];
        }
      }
    });
    auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return A * v; };
    const GmresOutcome g = gmres(apply, res.incident, x, options.tol, options.restart, options.max_iterations);
    res.diagnostics.method = "gmres";
    res.diagnostics.iterations = g.iterations;
    res.diagnostics.residual = g.residual;
    if (!g.converged) {
      x = A.partialPivLu().solve(res.incident);
      res.diagnostics.method = "lu";
      res.diagnostics.fallback = true;
      res.diagnostics.residual = (A * x - res.incident).norm() / res.incident.norm();
    }
  } else {
    auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
      Eigen::VectorXcd out(N);
      parallel_for(n, [&](std::size_t iu) {
        const Eigen::Index i = static_cast<Eigen::Index>(iu);
        Complex s = (1.0 - k2 * self[i] * res.potential[i]) * v[i];
        for (Eigen::Index j = 0; j < N; ++j) {
          if (j == i || wv[j] == 0.0) continue;
          const double r = (grid.nodes[iu] - grid.nodes[static_cast<std::size_t>(j)]).norm();
          s -= k2 * phi_from_distance(k, r) * wv[j] * v[j];
        }
        out[i] = s;
      });
      return out;
    };
    const GmresOutcome g = gmres(apply, res.incident, x, options.tol, options.restart, options.max_iterations);
    res.diagnostics.method = "gmres";
    res.diagnostics.iterations = g.iterations;
    res.diagnostics.residual = g.residual;
    if (!g.converged) {
      throw ResourceError("solve_total_field: iteration did not converge and the grid exceeds the dense cap");
    }
  }
  res.total = x;
  return res;
}

// ---------------------------------------------------------------- far field

Complex far_field_at(const ScatterResult& result, double theta) {
  const double k = result.k;
  const Point xhat(std::cos(theta), std::sin(theta));
  if (result.modal) {
    const ModalSolution& s = *result.modal;
    const Complex c = std::sqrt(2.0 / (kPi * k)) * std::exp(Complex(0.0, -k * xhat.dot(s.center)));
    Complex sum{};
    for (int n = -s.n_max; n <= s.n_max; ++n) {
      const Complex b = s.outgoing[n + s.n_max];
      if (b == 0.0) continue;
      sum += b * std::exp(Complex(0.0, -(n * kPi / 2.0 + kPi / 4.0) + n * theta));
    }
    return c * sum;
  }
  if (result.diagnostics.method == "trivial") return 0.0;
  const Complex pref = std::exp(Complex(0.0, kPi / 4.0)) / std::sqrt(8.0 * kPi * k) * k * k;
  Complex sum{};
  for (std::size_t j = 0; j < result.grid.size(); ++j) {
    const Eigen::Index jj = static_cast<Eigen::Index>(j);
    sum += result.grid.weights[jj] * std::exp(Complex(0.0, -k * xhat.dot(result.grid.nodes[j]))) *
           result.potential[jj] * result.total[jj];
  }
  return pref * sum;
}

FarFieldPattern far_field(const PotentialSpec& /*spec*/, const ScatterResult& result, int directions) {
  if (directions < kMinFarFieldDirections) throw DimensionError("far_field: need at least 64 directions");
  FarFieldPattern out;
  out.directions.resize(directions);
  out.values.resize(directions);
  parallel_for(static_cast<std::size_t>(directions), [&](std::size_t m) {
    const double t = 2.0 * kPi * static_cast<double>(m) / directions;
    out.directions[static_cast<Eigen::Index>(m)] = t;
    out.values[static_cast<Eigen::Index>(m)] = far_field_at(result, t);
  });
  out.l2_norm = std::sqrt(2.0 * kPi / directions * out.values.squaredNorm());
  return out;
}

ScatteredValues scattered_field_at(const PotentialSpec& spec, const ScatterResult& result,
                                   const Points& points) {
  ScatteredValues out;
  out.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(points.size()));
  for (const Point& p : points) {
    if (contains(spec.domain, p)) ++out.inside_count;
  }
  if (result.diagnostics.method == "trivial") return out;
  const double k = result.k;
  if (result.modal) {
    const ModalSolution& s = *result.modal;
    parallel_for(points.size(), [&](std::size_t i) {
      const Point& p = points[i];
      Complex v;
      if ((p - s.center).norm() > s.radius) {
        v = modal_outgoing(s, p, k);
      } else {
        const Eigen::VectorXcd a = s.incident;
        Complex inc{};
        const Point d = p - s.center;
        const double r = d.norm();
        const auto j = specfun::bessel_j_sequence(s.n_max, k * r);
        const double psi = std::atan2(d.y(), d.x());
        for (int n = -s.n_max; n <= s.n_max; ++n) inc += a[n + s.n_max] * signed_j(n, j) * std::exp(Complex(0.0, n * psi));
        v = modal_inside(s, p, k) - inc;
      }
      out.values[static_cast<Eigen::Index>(i)] = v;
    });
    return out;
  }
  const double k2 = k * k;
  const auto& grid = result.grid;
  parallel_for(points.size(), [&](std::size_t i) {
    const Point& p = points[i];
    Complex sum{};
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Eigen::Index jj = static_cast<Eigen::Index>(j);
      const Complex vu = result.potential[jj] * result.total[jj];
      if (vu == 0.0) continue;
      const double r = (p - grid.nodes[j]).norm();
      if (r < 1e-14) {
        sum += self_cell_integral(spec.domain, grid, j, k) * vu;
      } else {
        sum += phi_from_distance(k, r) * grid.weights[jj] * vu;
      }
    }
    out.values[static_cast<Eigen::Index>(i)] = k2 * sum;
  });
  return out;
}

}  // namespace tlab

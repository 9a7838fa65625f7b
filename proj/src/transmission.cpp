#include "tlab/transmission.hpp"

#include "tlab/parallel.hpp"
#include "tlab/quadrature.hpp"
#include "tlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tlab {
namespace {

Complex phi(double k, double r) { return 0.25 * kI * specfun::hankel1_01(k * r).h0; }

// Gradient of Phi_k at d = x - y.
CPoint grad_phi(double k, const Point& d) {
  const double r = d.norm();
  const Complex g = -0.25 * kI * k * specfun::hankel1_01(k * r).h1 / r;
  return CPoint(g * d.x(), g * d.y());
}

Point domain_center(const Domain& d) {
  if (const auto* disk = std::get_if<DiskDomain>(&d)) return disk->center;
  return std::get<PolygonDomain>(d).centroid();
}

double default_grid_h(const Domain& d) { return diameter(d) / 100.0; }

// Boundary samples with outward normals: per-edge midpoint rule (polygon) or equispaced (disk).
void boundary_samples(const Domain& domain, int n, bool cluster, Points& pts, Points& normals) {
  pts.clear();
  normals.clear();
  if (const auto* disk = std::get_if<DiskDomain>(&domain)) {
    for (int j = 0; j < n; ++j) {
      const Point u = polar_point(1.0, 2.0 * kPi * (j + 0.5) / n);
      pts.push_back(disk->center + disk->radius * u);
      normals.push_back(u);
    }
    return;
  }
  const auto& poly = std::get<PolygonDomain>(domain);
  double perimeter = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) perimeter += (poly.vertex(i + 1) - poly.vertex(i)).norm();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly.vertex(i);
    const Point e = poly.vertex(i + 1) - a;
    const int ne = std::max(2, static_cast<int>(std::lround(n * e.norm() / perimeter)));
    const Point nu = Point(e.y(), -e.x()).normalized();
    for (int j = 0; j < ne; ++j) {
      double t = (j + 0.5) / ne;
      if (cluster) t = 0.5 - 0.5 * std::cos(kPi * t);
      pts.push_back(a + t * e);
      normals.push_back(nu);
    }
  }
}

Points charge_curve(const Domain& domain, int n, double offset) {
  Points out;
  if (const auto* disk = std::get_if<DiskDomain>(&domain)) {
    for (int j = 0; j < n; ++j) out.push_back(disk->center + polar_point(disk->radius + offset, 2.0 * kPi * j / n));
    return out;
  }
  // Boundary of the polygon dilated by `offset`: shifted edges joined by circular arcs.
  const auto& poly = std::get<PolygonDomain>(domain);
  const std::size_t m = poly.size();
  std::vector<double> edge_len(m);
  std::vector<double> turn(m);
  std::vector<Point> nu(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point e = poly.vertex(i + 1) - poly.vertex(i);
    edge_len[i] = e.norm();
    nu[i] = Point(e.y(), -e.x()) / edge_len[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = nu[i];
    const Point& b = nu[(i + 1) % m];
    turn[i] = std::atan2(cross(a, b), a.dot(b));
    total += edge_len[i] + offset * turn[i];
  }
  for (int j = 0; j < n; ++j) {
    double s = total * j / n;
    for (std::size_t i = 0; i < m; ++i) {
      if (s < edge_len[i]) {
        const Point e = (poly.vertex(i + 1) - poly.vertex(i)) / edge_len[i];
        out.push_back(poly.vertex(i) + s * e + offset * nu[i]);
        break;
      }
      s -= edge_len[i];
      const double arc = offset * turn[i];
      if (s < arc) {
        const double ang = std::atan2(nu[i].y(), nu[i].x()) + s / offset;
        out.push_back(poly.vertex(i + 1) + polar_point(offset, ang));
        break;
      }
      s -= arc;
    }
  }
  return out;
}

struct Blocks {
  Eigen::MatrixXcd boundary;
  Eigen::MatrixXcd interior;
};

Blocks assemble(const MfsSetup& s, double k, double contrast) {
  const double kn = k * std::sqrt(1.0 + contrast);
  const Eigen::Index nc = static_cast<Eigen::Index>(s.colloc.size());
  const Eigen::Index ns = static_cast<Eigen::Index>(s.charges.size());
  const Eigen::Index ni = static_cast<Eigen::Index>(s.interior.size());
  Blocks b;
  b.boundary.resize(2 * nc, 2 * ns);
  b.interior = Eigen::MatrixXcd::Zero(2 * ni, 2 * ns);
  for (Eigen::Index j = 0; j < ns; ++j) {
    const Point& y = s.charges[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < nc; ++i) {
      const Point d = s.colloc[static_cast<std::size_t>(i)] - y;
      const Point& nu = s.normals[static_cast<std::size_t>(i)];
      const double r = d.norm();
      const auto h = specfun::hankel1_01(k * r);
      const auto hn = specfun::hankel1_01(kn * r);
      const double dn = d.dot(nu) / r;
      b.boundary(i, j) = -0.25 * kI * h.h0;
      b.boundary(i, ns + j) = 0.25 * kI * hn.h0;
      b.boundary(nc + i, j) = 0.25 * kI * k * h.h1 * dn / k;
      b.boundary(nc + i, ns + j) = -0.25 * kI * kn * hn.h1 * dn / k;
    }
    for (Eigen::Index i = 0; i < ni; ++i) {
      const double r = (s.interior[static_cast<std::size_t>(i)] - y).norm();
      b.interior(i, j) = phi(k, r);
      b.interior(ni + i, ns + j) = phi(kn, r);
    }
  }
  return b;
}

struct SubspaceSvd {
  Eigen::VectorXd sigma;  // ascending
  Eigen::MatrixXcd right; // matching right singular vectors
  Eigen::MatrixXcd r;     // triangular factor
};

SubspaceSvd subspace_svd(const MfsSetup& s, double k, double contrast, bool vectors) {
  const Blocks b = assemble(s, k, contrast);
  Eigen::MatrixXcd A(b.boundary.rows() + b.interior.rows(), b.boundary.cols());
  A << b.boundary, b.interior;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  const Eigen::MatrixXcd Qb = Q.topRows(b.boundary.rows());
  SubspaceSvd out;
  if (vectors) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(Qb, Eigen::ComputeThinV);
    out.sigma = svd.singularValues().reverse();
    out.right = svd.matrixV().rowwise().reverse();
    out.r = qr.matrixQR().topRows(A.cols()).triangularView<Eigen::Upper>();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(Qb);
    out.sigma = svd.singularValues().reverse();
  }
  return out;
}

void fill_residuals(TransmissionEigenpair& pair, double sup_v) {
  Points pts;
  Points normals;
  boundary_samples(pair.domain, 512, false, pts, normals);
  double rv = 0.0;
  double rn = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rv = std::max(rv, std::abs(pair.w(pts[i]) - pair.v(pts[i])));
    const CPoint g = pair.grad_w(pts[i]) - pair.grad_v(pts[i]);
    rn = std::max(rn, std::abs(g[0] * normals[i].x() + g[1] * normals[i].y()) / pair.k);
  }
  pair.residual_value = rv / sup_v;
  pair.residual_normal = rn / sup_v;
}

}  // namespace

// ---------------------------------------------------------------- eigenpair evaluation

Complex TransmissionEigenpair::v(const Point& x) const {
  if (method == "disk_mode") {
    const Point d = x - std::get<DiskDomain>(domain).center;
    return amp_v * specfun::bessel_j(mode, k * d.norm()) * std::exp(Complex(0.0, mode * std::atan2(d.y(), d.x())));
  }
  Complex s{};
  for (std::size_t j = 0; j < charges.size(); ++j) s += coeff_v[static_cast<Eigen::Index>(j)] * phi(k, (x - charges[j]).norm());
  return s;
}

Complex TransmissionEigenpair::w(const Point& x) const {
  const double kn = k * n_ref();
  if (method == "disk_mode") {
    const Point d = x - std::get<DiskDomain>(domain).center;
    return amp_w * specfun::bessel_j(mode, kn * d.norm()) * std::exp(Complex(0.0, mode * std::atan2(d.y(), d.x())));
  }
  Complex s{};
  for (std::size_t j = 0; j < charges.size(); ++j) s += coeff_w[static_cast<Eigen::Index>(j)] * phi(kn, (x - charges[j]).norm());
  return s;
}

namespace {

CPoint mode_gradient(Complex amp, int m, double kk, const Point& d) {
  const double r = std::max(d.norm(), 1e-300);
  const double th = std::atan2(d.y(), d.x());
  const Complex e = std::exp(Complex(0.0, m * th));
  const Complex dr = amp * kk * specfun::bessel_j_prime(m, kk * r) * e;
  const Complex dth = amp * specfun::bessel_j(m, kk * r) * kI * static_cast<double>(m) * e / r;
  const Point rh(std::cos(th), std::sin(th));
  const Point th_hat = perp(rh);
  return CPoint(dr * rh.x() + dth * th_hat.x(), dr * rh.y() + dth * th_hat.y());
}

}  // namespace

CPoint TransmissionEigenpair::grad_v(const Point& x) const {
  if (method == "disk_mode") return mode_gradient(amp_v, mode, k, x - std::get<DiskDomain>(domain).center);
  CPoint g = CPoint::Zero();
  for (std::size_t j = 0; j < charges.size(); ++j) g += coeff_v[static_cast<Eigen::Index>(j)] * grad_phi(k, x - charges[j]);
  return g;
}

CPoint TransmissionEigenpair::grad_w(const Point& x) const {
  const double kn = k * n_ref();
  if (method == "disk_mode") return mode_gradient(amp_w, mode, kn, x - std::get<DiskDomain>(domain).center);
  CPoint g = CPoint::Zero();
  for (std::size_t j = 0; j < charges.size(); ++j) g += coeff_w[static_cast<Eigen::Index>(j)] * grad_phi(kn, x - charges[j]);
  return g;
}

FieldSampler TransmissionEigenpair::v_sampler() const {
  return [self = *this](const Point& x) { return self.v(x); };
}

// ---------------------------------------------------------------- disks

Complex disk_determinant(int m, double k, double a, double n_ref) {
  if (!(k > 0.0) || !(a > 0.0) || !(n_ref > 0.0)) {
    throw DomainError("disk_determinant: k, a and n_ref must be positive");
  }
  const double x = k * a;
  const double y = k * n_ref * a;
  const double d = specfun::bessel_j(m, x) * (-k * n_ref * specfun::bessel_j_prime(m, y)) +
                   specfun::bessel_j(m, y) * k * specfun::bessel_j_prime(m, x);
  return d;
}

DiskEigenvalues disk_eigenvalues(int m_max, double k_lo, double k_hi, double a, double n_ref, double step) {
  if (!(k_lo > 0.0) || !(k_hi > k_lo) || !(step > 0.0)) throw DomainError("disk_eigenvalues: invalid interval");
  if (n_ref == 1.0) throw DegenerateInputError("disk_eigenvalues: n_ref = 1 makes every k an eigenvalue");
  DiskEigenvalues out;
  const int n = static_cast<int>(std::floor((k_hi - k_lo) / step)) + 1;
  for (int m = 0; m <= m_max; ++m) {
    auto det = [&](double k) { return disk_determinant(m, k, a, n_ref).real(); };
    std::vector<double> ks(n + 1);
    std::vector<double> ds(n + 1);
    for (int i = 0; i <= n; ++i) {
      ks[i] = std::min(k_lo + i * step, k_hi);
      ds[i] = det(ks[i]);
    }
    double last = -1.0;
    for (int i = 0; i < n; ++i) {
      if (ks[i + 1] <= ks[i]) continue;
      if ((ds[i] < 0) != (ds[i + 1] < 0) || ds[i + 1] == 0.0) {
        const double root = quad::bisect_root(det, ks[i], ks[i + 1], 1e-14);
        out.roots.push_back({m, root});
        if (last > 0.0 && root - last < 2.0 * step) {
          std::ostringstream os;
          os << "mode " << m << ": roots " << last << " and " << root << " closer than two scan steps";
          out.warnings.push_back(os.str());
        }
        if (std::abs(det(root)) > 1e-10) {
          std::ostringstream os;
          os << "mode " << m << ": |det| above 1e-10 at " << root;
          out.warnings.push_back(os.str());
        }
        last = root;
      } else if (i > 0 && std::abs(ds[i]) < std::abs(ds[i - 1]) && std::abs(ds[i]) < std::abs(ds[i + 1]) &&
                 (ds[i - 1] < 0) == (ds[i] < 0)) {
        // Local minimum of |det| without a sign change: look for a touching (double) root.
        const auto [kmin, fmin] = quad::golden_minimize([&](double k) { return std::abs(det(k)); },
                                                        ks[i - 1], ks[i + 1], 1e-12);
        if (fmin < 1e-8) {
          std::ostringstream os;
          os << "mode " << m << ": possible double root near " << kmin;
          out.warnings.push_back(os.str());
        }
      }
    }
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const DiskEigenvalue& x, const DiskEigenvalue& y) { return x.k < y.k; });
  return out;
}

TransmissionEigenpair disk_eigenfunction(int m, double k, const DiskDomain& disk, double contrast) {
  const double n_ref = std::sqrt(1.0 + contrast);
  const double a = disk.radius;
  if (std::abs(disk_determinant(m, k, a, n_ref)) > 1e-8) {
    throw PreconditionError("disk_eigenfunction: determinant is not small at k");
  }
  TransmissionEigenpair p;
  p.k = k;
  p.method = "disk_mode";
  p.domain = disk;
  p.contrast = contrast;
  p.mode = m;
  const double kn = k * n_ref;
  const double j1 = specfun::bessel_j(m, k * a);
  const double j2 = specfun::bessel_j(m, kn * a);
  const double d1 = k * specfun::bessel_j_prime(m, k * a);
  const double d2 = kn * specfun::bessel_j_prime(m, kn * a);
  // Null vector of [[j1, -j2], [d1, -d2]] from its better-conditioned row.
  double A, B;
  if (std::hypot(j1, j2) >= std::hypot(d1, d2) / k) {
    A = j2;
    B = j1;
  } else {
    A = d2;
    B = d1;
  }
  const auto& rule = quad::gauss_legendre(96);
  double integral = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double r = 0.5 * a * (rule.nodes[q] + 1.0);
    const double j = specfun::bessel_j(m, k * r);
    integral += 0.5 * a * rule.weights[q] * j * j * r;
  }
  const double norm = std::abs(A) * std::sqrt(2.0 * kPi * integral);
  const double sign = A < 0 ? -1.0 : 1.0;
  p.amp_v = sign * A / norm;
  p.amp_w = sign * B / norm;
  p.v_norm = std::abs(p.amp_v) * std::sqrt(2.0 * kPi * integral);
  double sup = 0.0;
  for (int i = 0; i <= 400; ++i) sup = std::max(sup, std::abs(p.amp_v * specfun::bessel_j(m, k * a * i / 400.0)));
  fill_residuals(p, sup);
  return p;
}

// ---------------------------------------------------------------- collocation

MfsSetup mfs_setup(const Domain& domain, const MfsParameters& params) {
  if (!(params.charge_offset > 0.0)) throw GeometryError("mfs_setup: charge curve must lie outside the domain");
  if (params.n_charge < 4) throw DimensionError("mfs_setup: too few charges");
  const int n_colloc = params.n_colloc > 0 ? params.n_colloc : 2 * params.n_charge;
  if (n_colloc < params.n_charge) throw DimensionError("mfs_setup: need n_colloc >= n_charge");
  MfsSetup s;
  s.domain = domain;
  boundary_samples(domain, n_colloc, true, s.colloc, s.normals);
  s.charges = charge_curve(domain, params.n_charge, params.charge_offset * diameter(domain));
  for (const Point& y : s.charges) {
    if (contains(domain, y)) throw GeometryError("mfs_setup: charge curve intersects the domain");
  }
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto [lo, hi] = bounding_box(domain);
  const Point c = domain_center(domain);
  while (static_cast<int>(s.interior.size()) < params.n_interior) {
    const Point p(lo.x() + (hi.x() - lo.x()) * unif(rng), lo.y() + (hi.y() - lo.y()) * unif(rng));
    if (contains(domain, c + (p - c) / 0.9)) s.interior.push_back(p);
  }
  return s;
}

Eigen::MatrixXcd mfs_matrix(const MfsSetup& setup, double k, double contrast) {
  if (!(k > 0.0)) throw DomainError("mfs_matrix: wavenumber must be positive");
  if (!(1.0 + contrast > 0.0)) throw DomainError("mfs_matrix: need 1 + V > 0");
  Eigen::MatrixXcd M = assemble(setup, k, contrast).boundary;
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    const double n = M.col(j).norm();
    if (n > 0.0) M.col(j) /= n;
  }
  return M;
}

Eigen::MatrixXcd mfs_matrix(const Domain& domain, double k, double contrast, const MfsParameters& params) {
  return mfs_matrix(mfs_setup(domain, params), k, contrast);
}

Eigen::VectorXd mfs_subspace_singular_values(const MfsSetup& setup, double k, double contrast) {
  if (!(k > 0.0)) throw DomainError("mfs: wavenumber must be positive");
  return subspace_svd(setup, k, contrast, false).sigma;
}

std::vector<double> SingularValueScan::detected_minima() const {
  std::vector<double> out;
  for (const auto& m : minima) out.push_back(m.k);
  return out;
}

SingularValueScan scan_eigenvalues(const Domain& domain, double contrast, double k_lo, double k_hi,
                                   double scan_step, const MfsParameters& params) {
  if (!(k_lo > 0.0) || !(k_hi > k_lo) || !(scan_step > 0.0)) throw DomainError("scan_eigenvalues: invalid range");
  if (!(1.0 + contrast > 0.0) || contrast == 0.0) throw DomainError("scan_eigenvalues: need V > -1, V != 0");
  const MfsSetup setup = mfs_setup(domain, params);
  SingularValueScan scan;
  const int n = static_cast<int>(std::floor((k_hi - k_lo) / scan_step + 1e-9)) + 1;
  scan.k_grid.resize(n);
  scan.sigma_min.resize(n);
  for (int i = 0; i < n; ++i) scan.k_grid[i] = k_lo + i * scan_step;
  auto sigma = [&](double k) { return mfs_subspace_singular_values(setup, k, contrast)[0]; };
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) { scan.sigma_min[i] = sigma(scan.k_grid[i]); });

  std::vector<double> sorted = scan.sigma_min;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  scan.threshold = sorted[n / 2] / 50.0;

  std::vector<int> candidates;
  for (int i = 1; i + 1 < n; ++i) {
    const double s = scan.sigma_min[i];
    if (s <= scan.sigma_min[i - 1] && s <= scan.sigma_min[i + 1] && s < 5.0 * scan.threshold) candidates.push_back(i);
  }
  std::vector<DetectedMinimum> found(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t c) {
    const int i = candidates[c];
    const auto [k, s] = quad::golden_minimize(sigma, scan.k_grid[i - 1], scan.k_grid[i + 1], 1e-7);
    found[c].k = k;
    found[c].sigma = s;
    const Eigen::VectorXd all = mfs_subspace_singular_values(setup, k, contrast);
    found[c].multiplicity = static_cast<int>((all.array() <= scan.threshold).count());
  });
  for (const auto& f : found) {
    if (f.sigma > scan.threshold) continue;
    if (!scan.minima.empty() && f.k - scan.minima.back().k < 1e-4) {
      if (f.sigma < scan.minima.back().sigma) scan.minima.back() = f;
      continue;
    }
    scan.minima.push_back(f);
  }
  return scan;
}

TransmissionEigenpair reconstruct_eigenfunction(const Domain& domain, double contrast, double k,
                                                const MfsParameters& params, int which, double threshold) {
  const MfsSetup setup = mfs_setup(domain, params);
  const SubspaceSvd svd = subspace_svd(setup, k, contrast, true);
  if (which < 0 || which >= svd.sigma.size()) throw DimensionError("reconstruct_eigenfunction: bad index");
  if (svd.sigma[which] > threshold) {
    std::ostringstream os;
    os << "reconstruct_eigenfunction: not an eigenvalue at tolerance (sigma = " << svd.sigma[which] << ")";
    throw DomainError(os.str());
  }
  const Eigen::VectorXcd c = svd.r.triangularView<Eigen::Upper>().solve(svd.right.col(which));
  const Eigen::Index ns = static_cast<Eigen::Index>(setup.charges.size());

  TransmissionEigenpair p;
  p.k = k;
  p.method = "mfs";
  p.domain = domain;
  p.contrast = contrast;
  p.charges = setup.charges;
  p.coeff_v = c.head(ns);
  p.coeff_w = c.tail(ns);
  p.sigma = svd.sigma[which];

  const QuadratureGrid grid = build_grid(domain, default_grid_h(domain));
  Eigen::VectorXcd vs(static_cast<Eigen::Index>(grid.size()));
  parallel_for(grid.size(), [&](std::size_t i) { vs[static_cast<Eigen::Index>(i)] = p.v(grid.nodes[i]); });
  const double norm = l2_norm(grid, vs);
  Eigen::Index imax = 0;
  vs.cwiseAbs().maxCoeff(&imax);
  const Complex phase = std::conj(vs[imax]) / std::abs(vs[imax]);
  p.coeff_v *= phase / norm;
  p.coeff_w *= phase / norm;
  vs *= phase / norm;
  p.v_norm = l2_norm(grid, vs);
  fill_residuals(p, vs.cwiseAbs().maxCoeff());
  return p;
}

// ---------------------------------------------------------------- vanishing profiles

double domain_average_abs(const FieldSampler& v, const Domain& domain, double grid_h) {
  const QuadratureGrid grid = build_grid(domain, grid_h > 0.0 ? grid_h : diameter(domain) / 200.0);
  Eigen::VectorXd a(static_cast<Eigen::Index>(grid.size()));
  parallel_for(grid.size(), [&](std::size_t i) { a[static_cast<Eigen::Index>(i)] = std::abs(v(grid.nodes[i])); });
  return integrate(grid, a) / grid.total_weight();
}

VanishingProfile vanishing_profile(const FieldSampler& v, const Domain& domain, const Point& center,
                                   const std::vector<double>& radii, double grid_h) {
  VanishingProfile out;
  for (double r : radii) {
    if (!(r > 0.0)) throw DomainError("vanishing_profile: radii must be positive");
    const BallAverage b = ball_average(v, domain, center, r);
    out.radii.push_back(r);
    out.averages.push_back(b.value);
    out.radius_warnings.push_back(b.radius_warning);
  }
  out.domain_average = domain_average_abs(v, domain, grid_h);
  return out;
}

VanishingProfile vanishing_profile(const TransmissionEigenpair& pair, const Point& center,
                                   const std::vector<double>& radii) {
  return vanishing_profile(pair.v_sampler(), pair.domain, center, radii);
}

}  // namespace tlab

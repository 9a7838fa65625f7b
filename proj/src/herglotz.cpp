#include "tlab/herglotz.hpp"

#include "tlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tlab {
namespace {

Complex ipow(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Fourier coefficients h_l, |l| <= L, of theta -> e^{i k theta.x_c}:
// h_l = i^l J_l(k|x_c|) e^{-i l phi_c}.
Eigen::VectorXcd plane_shift_coeffs(double k, const Point& x_c, int L) {
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(2 * L + 1);
  const double r = x_c.norm();
  const double phi = std::atan2(x_c.y(), x_c.x());
  const auto j = specfun::bessel_j_sequence(L, k * r);
  for (int l = -L; l <= L; ++l) {
    const int a = std::abs(l);
    const double jl = (l < 0 && a % 2 == 1) ? -j[a] : j[a];
    h[l + L] = ipow(l) * jl * std::exp(Complex(0.0, -l * phi));
  }
  return h;
}

// Rows n = n_lo..n_hi of the map c -> Fourier coefficients of e^{ik theta.x_c} g(theta).
Eigen::MatrixXcd shifted_coeff_rows(double k, const Point& x_c, int M, const std::vector<int>& ns) {
  int n_abs = 0;
  for (int n : ns) n_abs = std::max(n_abs, std::abs(n));
  const int L = n_abs + M;
  const auto h = plane_shift_coeffs(k, x_c, L);
  Eigen::MatrixXcd rows(static_cast<Eigen::Index>(ns.size()), 2 * M + 1);
  for (std::size_t r = 0; r < ns.size(); ++r) {
    for (int m = -M; m <= M; ++m) rows(static_cast<Eigen::Index>(r), m + M) = h[ns[r] - m + L];
  }
  return rows;
}

int derivative_quadrature_points(int M, int order, double k, const Point& x_c) {
  const int n = 2 * (M + order + static_cast<int>(std::ceil(k * x_c.norm())) + 48);
  return std::max(n, 96);
}

}  // namespace

// ---------------------------------------------------------------- kernel

HerglotzKernel::HerglotzKernel(Eigen::VectorXcd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 != 1) throw DimensionError("HerglotzKernel: need 2M+1 coefficients");
  if (truncation() > kMaxKernelTruncation) throw DimensionError("HerglotzKernel: truncation above cap");
  l2_norm_ = std::sqrt(2.0 * kPi * coeffs_.squaredNorm());
}

HerglotzKernel HerglotzKernel::zero(int M) { return HerglotzKernel(Eigen::VectorXcd::Zero(2 * M + 1)); }

HerglotzKernel HerglotzKernel::single_mode(int M, int m, Complex value) {
  if (std::abs(m) > M) throw DimensionError("single_mode: |m| exceeds truncation");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * M + 1);
  c[m + M] = value;
  return HerglotzKernel(std::move(c));
}

Complex HerglotzKernel::coeff(int m) const {
  const int M = truncation();
  return std::abs(m) > M ? Complex(0.0) : coeffs_[m + M];
}

HerglotzKernel HerglotzKernel::resized(int M) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * M + 1);
  for (int m = -M; m <= M; ++m) c[m + M] = coeff(m);
  return HerglotzKernel(std::move(c));
}

Complex HerglotzKernel::operator()(double theta) const {
  const int M = truncation();
  Complex sum{};
  for (int m = -M; m <= M; ++m) sum += coeffs_[m + M] * std::exp(Complex(0.0, m * theta));
  return sum;
}

HerglotzKernel operator+(const HerglotzKernel& a, const HerglotzKernel& b) {
  const int M = std::max(a.truncation(), b.truncation());
  return HerglotzKernel(a.resized(M).coeffs() + b.resized(M).coeffs());
}

HerglotzKernel operator*(Complex s, const HerglotzKernel& g) { return HerglotzKernel(s * g.coeffs()); }

// ---------------------------------------------------------------- polynomials

HomHarmonicPoly::HomHarmonicPoly(int degree, Complex a, Complex b)
    : degree_(degree), a_(a), b_(degree == 0 ? Complex(0.0) : b) {
  if (degree < 0) throw DomainError("HomHarmonicPoly: negative degree");
  if (degree_ == 0) {
    norm_ = 2.0 * kPi * std::abs(a_);
    return;
  }
  // |a cos t + b sin t|^2 = S + R cos(2t - t0); the circle integral is an
  // elliptic integral of the second kind.
  const double s = 0.5 * (std::norm(a_) + std::norm(b_));
  const double d = 0.5 * (std::norm(a_) - std::norm(b_));
  const double c = std::real(a_ * std::conj(b_));
  const double r = std::hypot(d, c);
  if (s + r <= 0.0) {
    norm_ = 0.0;
    return;
  }
  const double modulus = std::sqrt(std::clamp(2.0 * r / (s + r), 0.0, 1.0));
  norm_ = 4.0 * std::sqrt(s + r) * std::comp_ellint_2(modulus);
}

Complex HomHarmonicPoly::operator()(const Point& x) const {
  const Complex zn = std::pow(Complex(x.x(), x.y()), degree_);
  return a_ * zn.real() + b_ * zn.imag();
}

Complex HomHarmonicPoly::on_circle(double theta) const {
  return a_ * std::cos(degree_ * theta) + b_ * std::sin(degree_ * theta);
}

double circle_norm_quadrature(const HomHarmonicPoly& p, int points) {
  double sum = 0.0;
  for (int j = 0; j < points; ++j) sum += std::abs(p.on_circle(2.0 * kPi * j / points));
  return sum * 2.0 * kPi / points;
}

// ---------------------------------------------------------------- evaluation

Complex evaluate(const HerglotzKernel& g, double k, const Point& x) {
  if (!(k > 0.0)) throw DomainError("evaluate: wavenumber must be positive");
  const int M = g.truncation();
  const double r = x.norm();
  const auto j = specfun::bessel_j_sequence(M, k * r);
  const Complex e1 = r > 0.0 ? Complex(x.x(), x.y()) / r : Complex(1.0);
  Complex sum = g.coeff(0) * j[0];
  Complex ep = 1.0;  // e^{i m phi}
  for (int m = 1; m <= M; ++m) {
    ep *= e1;
    const Complex im = ipow(m);
    const double jm = j[m];
    const double sign = (m % 2 == 1) ? -1.0 : 1.0;
    // c_m i^m J_m e^{im phi} + c_{-m} i^{-m} J_{-m} e^{-im phi}
    sum += jm * (g.coeff(m) * im * ep + g.coeff(-m) * std::conj(im) * sign * std::conj(ep));
  }
  return 2.0 * kPi * sum;
}

Eigen::VectorXcd evaluate(const HerglotzKernel& g, double k, const Points& points) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) out[static_cast<Eigen::Index>(i)] = evaluate(g, k, points[i]);
  return out;
}

HerglotzKernel normalize(const HerglotzKernel& g) {
  if (!(g.l2_norm() > 0.0)) throw DegenerateInputError("normalize: zero kernel");
  if (g.l2_norm() == 1.0) return g;
  return HerglotzKernel(g.coeffs() / g.l2_norm());
}

Eigen::VectorXcd shifted_coefficients(const HerglotzKernel& g, double k, const Point& c, int n_max) {
  const int M = g.truncation();
  if (n_max + M > specfun::kMaxOrder) throw DimensionError("shifted_coefficients: order above cap");
  std::vector<int> ns;
  for (int n = -n_max; n <= n_max; ++n) ns.push_back(n);
  return shifted_coeff_rows(k, c, M, ns) * g.coeffs();
}

// ---------------------------------------------------------------- derivatives

Complex derivative_at(const HerglotzKernel& g, double k, const Point& x_c, MultiIndex gamma) {
  if (gamma[0] < 0 || gamma[1] < 0) throw DomainError("derivative_at: negative multi-index");
  const int order = gamma[0] + gamma[1];
  if (order > kMaxDerivativeOrder) throw DomainError("derivative_at: |gamma| above cap");
  const int n = derivative_quadrature_points(g.truncation(), order, k, x_c);
  Complex sum{};
  const Complex ik(0.0, k);
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * j / n;
    const double c = std::cos(t);
    const double s = std::sin(t);
    const Complex mono = std::pow(ik * c, gamma[0]) * std::pow(ik * s, gamma[1]);
    sum += mono * std::exp(ik * (c * x_c.x() + s * x_c.y())) * g(t);
  }
  return sum * (2.0 * kPi / n);
}

Eigen::VectorXcd taylor_coefficients(const HerglotzKernel& g, double k, const Point& x_c, int n) {
  if (n > kMaxDerivativeOrder) throw DomainError("taylor_coefficients: order above cap");
  const int q = derivative_quadrature_points(g.truncation(), n, k, x_c);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n + 1);
  const Complex ik(0.0, k);
  for (int j = 0; j < q; ++j) {
    const double t = 2.0 * kPi * j / q;
    const double c = std::cos(t);
    const double s = std::sin(t);
    const Complex base = std::exp(ik * (c * x_c.x() + s * x_c.y())) * g(t);
    for (int j2 = 0; j2 <= n; ++j2) {
      out[j2] += std::pow(ik * c, n - j2) * std::pow(ik * s, j2) * base;
    }
  }
  for (int j2 = 0; j2 <= n; ++j2) out[j2] *= (2.0 * kPi / q) / (factorial(n - j2) * factorial(j2));
  return out;
}

VanishingOrder vanishing_order(const HerglotzKernel& g, double k, const Point& x_c, double tol,
                               int n_max) {
  if (!(g.l2_norm() > 0.0)) throw DegenerateInputError("vanishing_order: zero kernel");
  n_max = std::min(n_max, kMaxDerivativeOrder);
  const double threshold = tol * g.l2_norm();
  for (int n = 0; n <= n_max; ++n) {
    const Eigen::VectorXcd t = taylor_coefficients(g, k, x_c, n);
    const double max_coeff = t.cwiseAbs().maxCoeff();
    if (max_coeff <= threshold) continue;

    VanishingOrder out;
    out.order = n;
    out.max_coefficient = max_coeff;
    if (n == 0) {
      out.leading = HomHarmonicPoly(0, t[0], 0.0);
      return out;
    }
    // Project the degree-n polynomial on the circle onto e^{+-i n theta}.
    const int L = 4 * n + 8;
    std::vector<Complex> samples(L);
    Complex alpha{};
    Complex beta{};
    for (int l = 0; l < L; ++l) {
      const double th = 2.0 * kPi * l / L;
      Complex p{};
      for (int j2 = 0; j2 <= n; ++j2) p += t[j2] * std::pow(std::cos(th), n - j2) * std::pow(std::sin(th), j2);
      samples[l] = p;
      alpha += p * std::exp(Complex(0.0, -n * th));
      beta += p * std::exp(Complex(0.0, n * th));
    }
    alpha /= static_cast<double>(L);
    beta /= static_cast<double>(L);
    out.leading = HomHarmonicPoly(n, alpha + beta, kI * (alpha - beta));
    double resid = 0.0;
    for (int l = 0; l < L; ++l) {
      resid = std::max(resid, std::abs(samples[l] - out.leading.on_circle(2.0 * kPi * l / L)));
    }
    out.projection_residual = resid / g.l2_norm();
    return out;
  }
  throw DomainError("vanishing_order: order exceeds N_max");
}

// ---------------------------------------------------------------- synthesis

Eigen::MatrixXcd vanishing_null_space(double k, const Point& x_c, int N, int M) {
  if (N < 0 || M < 0) throw DimensionError("vanishing_null_space: negative order or truncation");
  if (N * (N + 1) / 2 >= 2 * M + 1) {
    throw DimensionError("vanishing_null_space: too few basis functions for the order constraints");
  }
  const int dim = 2 * M + 1;
  if (N == 0) return Eigen::MatrixXcd::Identity(dim, dim);
  // u vanishes to order N at x_c iff the cylindrical coefficients of u about
  // x_c vanish for |n| < N.
  std::vector<int> ns;
  for (int n = -(N - 1); n <= N - 1; ++n) ns.push_back(n);
  const Eigen::MatrixXcd A = shifted_coeff_rows(k, x_c, M, ns);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-12 * sv[0]) ++rank;
  }
  if (rank >= dim) throw DimensionError("vanishing_null_space: constraints have full rank");
  return svd.matrixV().rightCols(dim - rank);
}

HerglotzKernel synthesize_vanishing_kernel(double k, const Point& x_c, int N, int M) {
  if (!(k > 0.0)) throw DomainError("synthesize_vanishing_kernel: wavenumber must be positive");
  const Eigen::MatrixXcd Z = vanishing_null_space(k, x_c, N, M);
  // Leading cylindrical coefficients n = +-N carry the degree-N Taylor polynomial.
  const Eigen::MatrixXcd D = shifted_coeff_rows(k, x_c, M, N == 0 ? std::vector<int>{0}
                                                                    : std::vector<int>{N, -N});
  const Eigen::MatrixXcd DZ = D * Z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(DZ.adjoint() * DZ);
  const Eigen::Index top = eig.eigenvalues().size() - 1;
  if (!(eig.eigenvalues()[top] > 1e-24)) {
    throw DimensionError("synthesize_vanishing_kernel: no kernel of exact order N in the basis");
  }
  Eigen::VectorXcd c = Z * eig.eigenvectors().col(top);
  // Fix the global phase so that the largest coefficient is real positive.
  Eigen::Index imax = 0;
  c.cwiseAbs().maxCoeff(&imax);
  c *= std::conj(c[imax]) / std::abs(c[imax]);
  return normalize(HerglotzKernel(c));
}

// ---------------------------------------------------------------- fitting

KernelFit fit_kernel(const QuadratureGrid& grid, const Eigen::VectorXcd& target, double k, int M,
                     double lambda) {
  if (!(k > 0.0)) throw DomainError("fit_kernel: wavenumber must be positive");
  if (target.size() != static_cast<Eigen::Index>(grid.size())) {
    throw DimensionError("fit_kernel: target size does not match grid");
  }
  if (!target.allFinite()) throw DomainError("fit_kernel: non-finite target samples");
  if (M < 0 || M > kMaxKernelTruncation) throw DimensionError("fit_kernel: truncation out of range");

  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  const int dim = 2 * M + 1;
  Eigen::MatrixXcd B(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point& x = grid.nodes[static_cast<std::size_t>(i)];
    const double r = x.norm();
    const auto j = specfun::bessel_j_sequence(M, k * r);
    const Complex e1 = r > 0.0 ? Complex(x.x(), x.y()) / r : Complex(1.0);
    Complex ep = 1.0;
    B(i, M) = 2.0 * kPi * j[0];
    for (int m = 1; m <= M; ++m) {
      ep *= e1;
      const double sign = (m % 2 == 1) ? -1.0 : 1.0;
      B(i, M + m) = 2.0 * kPi * ipow(m) * j[m] * ep;
      B(i, M - m) = 2.0 * kPi * std::conj(ipow(m)) * sign * j[m] * std::conj(ep);
    }
  }
  const Eigen::VectorXd& w = grid.weights;
  const Eigen::MatrixXcd WB = w.cast<Complex>().asDiagonal() * B;
  Eigen::MatrixXcd G = B.adjoint() * WB;
  const Eigen::VectorXcd rhs = WB.adjoint() * target;

  KernelFit fit;
  const double max_diag = G.diagonal().real().maxCoeff();
  fit.lambda = lambda < 0.0 ? 1e-10 * max_diag : lambda;
  G.diagonal().array() += 2.0 * kPi * fit.lambda;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G, Eigen::EigenvaluesOnly);
  const double emax = eig.eigenvalues().maxCoeff();
  const double emin = eig.eigenvalues().minCoeff();
  fit.condition_estimate = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
  fit.ill_conditioned = fit.lambda == 0.0 && fit.condition_estimate > 1e13;

  Eigen::VectorXcd c;
  if (fit.ill_conditioned) {
    c = G.completeOrthogonalDecomposition().solve(rhs);
  } else {
    c = G.ldlt().solve(rhs);
  }
  fit.kernel = HerglotzKernel(c);
  fit.residual = l2_norm(grid, B * c - target);
  return fit;
}

double taylor_remainder_bound(const HerglotzKernel& g, double k, int N) {
  // sum_{|beta| = N+1} 1 / beta! = 2^{N+1} / (N+1)!
  const int n = N + 1;
  double s = 0.0;
  for (int b1 = 0; b1 <= n; ++b1) s += 1.0 / (factorial(b1) * factorial(n - b1));
  return s * std::pow(k, n) * std::sqrt(2.0 * kPi) * g.l2_norm();
}

}  // namespace tlab

#include "tlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tlab::specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kRescaleAt = 1e200;

void check_argument(double x, bool strictly_positive) {
  if (!std::isfinite(x)) throw DomainError("cylinder function: non-finite argument");
  if (strictly_positive ? x <= 0.0 : x < 0.0) {
    throw DomainError(strictly_positive
                          ? "cylinder function: Y/H family needs x > 0 (log singularity)"
                          : "cylinder function: negative argument");
  }
}

int miller_start(int m_max, double x) {
  const double n0 = std::max(static_cast<double>(m_max), std::ceil(x));
  int start = static_cast<int>(n0 + 30.0 + std::sqrt(40.0 * n0));
  return start + (start % 2);
}

// J_0..J_top with top >= m_max by backward recurrence, normalised through
// J_0 + 2 sum J_2k = 1. The full tail is returned because the Neumann series
// for Y_0, Y_1 consumes it.
std::vector<double> miller_block(int m_max, double x) {
  const int start = miller_start(m_max, x);
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[start] = 1.0;
  for (int n = start; n >= 1; --n) {
    j[n - 1] = (2.0 * n / x) * j[n] - j[n + 1];
    if (std::abs(j[n - 1]) > kRescaleAt) {
      for (int i = n - 1; i <= start; ++i) j[i] /= kRescaleAt;
    }
  }
  double norm = j[0];
  for (int n = 2; n <= start; n += 2) norm += 2.0 * j[n];
  for (double& v : j) v /= norm;
  return j;
}

std::vector<double> series_block(int m_max, double x) {
  std::vector<double> j(static_cast<std::size_t>(m_max) + 1, 0.0);
  const double half = 0.5 * x;
  const double q = -half * half;
  double lead = 1.0;  // (x/2)^m / m!
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) lead *= half / m;
    if (lead == 0.0) break;
    double term = lead;
    double sum = term;
    for (int k = 1; k < 60; ++k) {
      term *= q / (static_cast<double>(k) * (k + m));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    j[m] = sum;
  }
  return j;
}

struct Y01 {
  double y0;
  double y1;
};

// Logarithmic series, A&S 9.1.11 specialised to n = 0, 1.
Y01 series_y01(double x, double j0, double j1) {
  const double half = 0.5 * x;
  const double q = -half * half;
  const double log_half = std::log(half);

  double psi_k = -kEulerGamma;  // psi(k + 1)
  double term = 1.0;            // q^k / (k!)^2
  double s0 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      psi_k += 1.0 / k;
      term *= q / (static_cast<double>(k) * k);
    }
    const double add = 2.0 * psi_k * term;
    s0 += add;
    if (k > 2 && std::abs(add) < 1e-18 * std::abs(s0)) break;
  }

  psi_k = -kEulerGamma;
  double psi_k1 = 1.0 - kEulerGamma;  // psi(k + 2)
  term = 1.0;                          // q^k / (k! (k+1)!)
  double s1 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      psi_k += 1.0 / k;
      psi_k1 += 1.0 / (k + 1);
      term *= q / (static_cast<double>(k) * (k + 1));
    }
    const double add = (psi_k + psi_k1) * term;
    s1 += add;
    if (k > 2 && std::abs(add) < 1e-18 * std::abs(s1)) break;
  }

  Y01 out;
  out.y0 = (2.0 / kPi) * log_half * j0 - s0 / kPi;
  out.y1 = -2.0 / (kPi * x) + (2.0 / kPi) * log_half * j1 - half * s1 / kPi;
  return out;
}

// Neumann series in the normalised Miller block.
Y01 neumann_y01(double x, const std::vector<double>& j) {
  const double lg = std::log(0.5 * x) + kEulerGamma;
  const int top = static_cast<int>(j.size()) - 2;
  double s0 = 0.0;
  double s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= top; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  Y01 out;
  out.y0 = (2.0 / kPi) * (lg * j[0] - 2.0 * s0);
  out.y1 = (2.0 / kPi) * (-j[0] / x + lg * j[1] + s1);
  return out;
}

// Hankel large-argument expansion for integer order nu in {0, 1}.
Y01 asymptotic_y01(double x) {
  double y[2];
  for (int nu = 0; nu < 2; ++nu) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 80; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (k * 8.0 * x);
      if (std::abs(term) > last) break;
      last = std::abs(term);
      switch (k % 4) {
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        default: p += term; break;
      }
      if (last < 1e-17) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    y[nu] = std::sqrt(2.0 / (kPi * x)) * (p * std::sin(chi) + q * std::cos(chi));
  }
  return {y[0], y[1]};
}

std::vector<double> j_block(int m_max, double x) {
  if (x == 0.0) {
    std::vector<double> j(static_cast<std::size_t>(m_max) + 1, 0.0);
    j[0] = 1.0;
    return j;
  }
  if (x < kSeriesLimit) return series_block(m_max, x);
  return miller_block(m_max, x);
}

Y01 y01(double x, const std::vector<double>& j_full) {
  if (x < kSeriesLimit) return series_y01(x, j_full[0], j_full.size() > 1 ? j_full[1] : 0.0);
  if (x <= kAsymptoticLimit) return neumann_y01(x, j_full);
  return asymptotic_y01(x);
}

void check_order(int m) {
  if (m < 0 || m > kMaxOrder) {
    throw DomainError("cylinder order " + std::to_string(m) + " outside [0, " +
                      std::to_string(kMaxOrder) + "]");
  }
}

std::vector<double> y_from_j(int m_max, double x, const std::vector<double>& j_full) {
  const Y01 base = y01(x, j_full);
  std::vector<double> y(static_cast<std::size_t>(std::max(m_max, 1)) + 1);
  y[0] = base.y0;
  y[1] = base.y1;
  for (int n = 1; n < m_max; ++n) y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
  y.resize(static_cast<std::size_t>(m_max) + 1);
  return y;
}

}  // namespace

CylinderOrder::CylinderOrder(int m) : m_(m) { check_order(m); }

std::vector<double> bessel_j_sequence(int m_max, double x) {
  check_order(std::max(m_max, 0));
  check_argument(x, false);
  auto j = j_block(m_max + 1, x);
  j.resize(static_cast<std::size_t>(m_max) + 1);
  return j;
}

std::vector<double> bessel_y_sequence(int m_max, double x) {
  check_order(std::max(m_max, 0));
  check_argument(x, true);
  return y_from_j(m_max, x, j_block(std::max(m_max, 1) + 1, x));
}

double bessel_j(CylinderOrder m, double x) { return bessel_j_sequence(m, x)[m]; }

double bessel_y(CylinderOrder m, double x) { return bessel_y_sequence(m, x)[m]; }

Complex hankel1(CylinderOrder m, double x) {
  check_argument(x, true);
  const auto j = j_block(std::max<int>(m, 1) + 1, x);
  const auto y = y_from_j(m, x, j);
  return {j[m], y[m]};
}

double bessel_j_prime(CylinderOrder m, double x) {
  check_argument(x, false);
  const auto j = j_block(m + 1, x);
  if (m == 0) return -j[1];
  return 0.5 * (j[m - 1] - j[m + 1]);
}

double bessel_y_prime(CylinderOrder m, double x) {
  check_argument(x, true);
  const auto y = y_from_j(m + 1, x, j_block(m + 2, x));
  if (m == 0) return -y[1];
  return 0.5 * (y[m - 1] - y[m + 1]);
}

Complex hankel1_prime(CylinderOrder m, double x) {
  check_argument(x, true);
  const auto j = j_block(m + 2, x);
  const auto y = y_from_j(m + 1, x, j);
  if (m == 0) return {-j[1], -y[1]};
  return {0.5 * (j[m - 1] - j[m + 1]), 0.5 * (y[m - 1] - y[m + 1])};
}

double bessel_j_signed(int m, double x) {
  const int a = std::abs(m);
  const double v = bessel_j(a, x);
  return (m < 0 && (a % 2 == 1)) ? -v : v;
}

HankelPair hankel1_01(double x) {
  check_argument(x, true);
  const auto j = j_block(2, x);
  const Y01 y = y01(x, j);
  return {{j[0], y.y0}, {j[1], y.y1}};
}

}  // namespace tlab::specfun

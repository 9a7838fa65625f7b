#pragma once

#include "tlab/types.hpp"

#include <vector>

/// Integer-order cylinder functions of real argument.
///
/// Evaluation regions (fixed crossovers):
///   x < kSeriesLimit        power series for J_m, logarithmic series for Y_0, Y_1
///   x <= kAsymptoticLimit   Miller backward recurrence for J_m, Neumann series for Y_0, Y_1
///   x >  kAsymptoticLimit   Miller for J_m, Hankel asymptotic expansion for Y_0, Y_1
/// Y_m for m >= 2 always comes from forward recurrence, which is stable for Y.
namespace tlab::specfun {

inline constexpr int kMaxOrder = 200;
inline constexpr double kSeriesLimit = 2.0;
inline constexpr double kAsymptoticLimit = 40.0;

/// Non-negative cylinder order, checked against the supported range.
class CylinderOrder {
 public:
  CylinderOrder(int m);  // NOLINT(google-explicit-constructor)
  int value() const { return m_; }
  operator int() const { return m_; }  // NOLINT(google-explicit-constructor)

 private:
  int m_;
};

double bessel_j(CylinderOrder m, double x);
double bessel_y(CylinderOrder m, double x);
Complex hankel1(CylinderOrder m, double x);
double bessel_j_prime(CylinderOrder m, double x);
double bessel_y_prime(CylinderOrder m, double x);
Complex hankel1_prime(CylinderOrder m, double x);

/// J_0(x), ..., J_{m_max}(x) from a single recurrence sweep.
std::vector<double> bessel_j_sequence(int m_max, double x);
/// Y_0(x), ..., Y_{m_max}(x).
std::vector<double> bessel_y_sequence(int m_max, double x);

/// J_m for signed m, using J_{-m} = (-1)^m J_m.
double bessel_j_signed(int m, double x);

struct HankelPair {
  Complex h0;
  Complex h1;
};
/// H_0^{(1)}(x) and H_1^{(1)}(x) together; the hot path of kernel assembly.
HankelPair hankel1_01(double x);

}  // namespace tlab::specfun

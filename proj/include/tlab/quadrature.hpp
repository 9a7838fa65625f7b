#pragma once

#include "tlab/types.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace tlab::quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on P_n).
const GaussRule& gauss_legendre(int n);

/// Fixed-order Gauss-Legendre integral of f over [a, b].
template <typename F>
auto gauss(F&& f, double a, double b, int n) -> decltype(f(a)) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  decltype(f(a)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

template <typename T>
struct AdaptiveResult {
  T value{};
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {
extern const std::array<double, 8> kKronrodNodes;
extern const std::array<double, 8> kKronrodWeights;
extern const std::array<double, 4> kGaussWeights;
}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7-15) integration of a real- or
/// complex-valued f over [a, b]. Stops when the summed error estimate is below
/// max(abs_tol, rel_tol * |I|) or the evaluation cap is reached.
template <typename F>
auto gauss_kronrod(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                   int max_evaluations = 1'000'000) {
  using T = decltype(f(a));
  struct Panel {
    double a, b;
    T value;
    double error;
  };
  auto eval_panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    T kron{};
    T gauss{};
    for (int i = 0; i < 8; ++i) {
      const double x = detail::kKronrodNodes[i];
      if (i == 7) {
        const T fc = f(mid);
        kron += detail::kKronrodWeights[i] * fc;
        gauss += detail::kGaussWeights[3] * fc;
      } else {
        const T f1 = f(mid - half * x);
        const T f2 = f(mid + half * x);
        kron += detail::kKronrodWeights[i] * (f1 + f2);
        if (i % 2 == 1) gauss += detail::kGaussWeights[i / 2] * (f1 + f2);
      }
    }
    return Panel{lo, hi, kron * half, std::abs(kron * half - gauss * half)};
  };

  AdaptiveResult<T> out;
  std::vector<Panel> panels{eval_panel(a, b)};
  out.evaluations = 15;
  for (;;) {
    T total{};
    double err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    out.value = total;
    out.error_estimate = err;
    if (err <= std::max(abs_tol, rel_tol * std::abs(total)) || err == 0.0) break;
    if (out.evaluations + 30 > max_evaluations) {
      out.converged = false;
      break;
    }
    const Panel p = panels[worst];
    const double m = 0.5 * (p.a + p.b);
    panels[worst] = eval_panel(p.a, m);
    panels.push_back(eval_panel(m, p.b));
    out.evaluations += 30;
  }
  return out;
}

/// Golden-section search for a minimiser of f on [a, b].
template <typename F>
std::pair<double, double> golden_minimize(F&& f, double a, double b, double x_tol,
                                          int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Bisection on a sign change of f over [a, b].
double bisect_root(const std::function<double(double)>& f, double a, double b, double x_tol,
                   int max_iter = 200);

}  // namespace tlab::quad

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlab {

using Complex = std::complex<double>;
using Point = Eigen::Vector2d;
using CPoint = Eigen::Vector2cd;
using Points = std::vector<Point, Eigen::aligned_allocator<Point>>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy shared by all modules.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct GeometryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Point polar_point(double r, double theta) {
  return {r * std::cos(theta), r * std::sin(theta)};
}

inline Point perp(const Point& p) { return {-p.y(), p.x()}; }

inline double cross(const Point& a, const Point& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace tlab

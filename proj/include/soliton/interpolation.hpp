#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace soliton {

/// Piecewise cubic Hermite interpolant on sorted abscissae with supplied
/// nodal derivatives. Slopes are limited with the Fritsch-Carlson rule so
/// that monotone data stays monotone; on smooth convex increasing data with
/// exact derivatives the limiter is inactive and the interpolant is O(h^4).
struct HermiteSample {
  double value;
  double derivative;
};

namespace detail {

// Fritsch-Carlson: on each interval the scaled slopes (a, b) must lie in the
// disc a^2 + b^2 <= 9 and agree in sign with the secant.
inline void limit_slopes(double secant, double& d0, double& d1) {
  if (secant == 0.0) {
    d0 = 0.0;
    d1 = 0.0;
    return;
  }
  double a = d0 / secant;
  double b = d1 / secant;
  if (a < 0.0) { a = 0.0; }
  if (b < 0.0) { b = 0.0; }
  const double radius = a * a + b * b;
  if (radius > 9.0) {
    const double tau = 3.0 / std::sqrt(radius);
    a *= tau;
    b *= tau;
  }
  d0 = a * secant;
  d1 = b * secant;
}

}  // namespace detail

/// Evaluates the monotone cubic through (x_i, y_i) with derivatives dy_i.
/// `x` must be strictly increasing and `at` inside [x.front(), x.back()].
inline HermiteSample hermite_eval(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> dy, double at) {
  if (x.size() < 2 || y.size() != x.size() || dy.size() != x.size()) {
    throw std::invalid_argument("hermite_eval: mismatched or too few samples");
  }
  if (!(at >= x.front() && at <= x.back())) {
    throw std::invalid_argument("hermite_eval: abscissa outside the sample range");
  }
  auto it = std::upper_bound(x.begin(), x.end(), at);
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  i = std::clamp<std::size_t>(i, 1, x.size() - 1) - 1;

  const double h = x[i + 1] - x[i];
  const double secant = (y[i + 1] - y[i]) / h;
  double d0 = dy[i];
  double d1 = dy[i + 1];
  detail::limit_slopes(secant, d0, d1);

  const double s = (at - x[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double value = h00 * y[i] + h10 * h * d0 + h01 * y[i + 1] + h11 * h * d1;

  const double g00 = 6.0 * s2 - 6.0 * s;
  const double g10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double g11 = 3.0 * s2 - 2.0 * s;
  const double derivative = g00 * (y[i] - y[i + 1]) / h + g10 * d0 + g11 * d1;
  return {value, derivative};
}

}  // namespace soliton

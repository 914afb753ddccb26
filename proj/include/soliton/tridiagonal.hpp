#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace soliton {

/// Tridiagonal system A x = d with sub-diagonal `lower` (lower[0] unused),
/// diagonal `diag` and super-diagonal `upper` (upper[n-1] unused).
/// Thomas algorithm without pivoting; callers supply diagonally dominant
/// or otherwise well-conditioned systems.
inline std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                             std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  }
  std::vector<double> c(n);
  std::vector<double> x(n);
  double denom = diag[0];
  if (denom == 0.0) {
    throw std::domain_error("solve_tridiagonal: zero pivot");
  }
  c[0] = upper[0] / denom;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    if (denom == 0.0) {
      throw std::domain_error("solve_tridiagonal: zero pivot");
    }
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] -= c[i] * x[i + 1];
  }
  return x;
}

}  // namespace soliton

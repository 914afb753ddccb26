#pragma once

// Dirichlet problem for the radial soliton equation on [0, R]:
//
//     r'' / (1 - r'^2) + (n - 1) r' / t = 1,   r'(0) = 0,   r(R) = beta,
//
// discretized by central differences on t_j = j R / m and solved by damped
// Newton iteration. At the origin an even ghost node r_{-1} = r_1 and the
// limit form n r''(0) = 1 of the equation give the row 2 n (r_1 - r_0) = dt^2.
//
// Residuals are in second-difference units (multiplied by dt^2), which keeps
// them free of 1/dt^2 round-off amplification; `final_residual` is reported
// in those units.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "soliton/dimension.hpp"
#include "soliton/errors.hpp"
#include "soliton/profile.hpp"
#include "soliton/radial_operator.hpp"

namespace soliton {

struct BvpSolution {
  int n = 1;
  double radius = 0.0;
  double boundary_value = 0.0;
  std::vector<double> t;
  std::vector<double> r;
  int newton_iters = 0;
  /// Max-norm of the dt^2-scaled discrete residual at the returned iterate.
  double final_residual = 0.0;

  std::size_t intervals() const { return r.size() - 1; }
  double spacing() const { return radius / static_cast<double>(intervals()); }
};

using BvpOptions = detail::NewtonSettings;

namespace detail {

inline void check_bvp_args(double radius, std::size_t m) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("solve_bvp: radius must be positive");
  }
  if (m < 16) {
    throw std::invalid_argument("solve_bvp: need at least 16 intervals");
  }
}

}  // namespace detail

/// Damped Newton from an explicit initial iterate (m+1 values; the last is
/// overwritten with beta).
inline BvpSolution solve_bvp_from(Dimension n, double radius, double beta, std::vector<double> initial,
                                  const BvpOptions& opts = {}) {
  if (initial.size() < 17) {
    throw std::invalid_argument("solve_bvp: need at least 16 intervals");
  }
  const std::size_t m = initial.size() - 1;
  detail::check_bvp_args(radius, m);
  const detail::RadialOperator op{n.as_double(), radius / static_cast<double>(m), m};
  const double h2 = op.h * op.h;

  const std::vector<double> offset(m, h2);

  initial[m] = beta;
  auto solve = [&](std::vector<double> start, detail::RowForm form) {
    auto residual = [&](std::span<const double> v) { return op.residual(v, 0.0, offset, form); };
    auto jacobian = [&](std::span<const double> v) { return op.jacobian(v, 0.0, offset, form); };
    return detail::damped_newton(std::move(start), op.h, residual, jacobian, opts, "solve_bvp");
  };
  // Converge in the plain form, then polish in the cleared form.
  auto result = solve(std::move(initial), detail::RowForm::kPlain);
  const int plain_iters = result.iters;
  result = solve(std::move(result.values), detail::RowForm::kCleared);
  result.iters += plain_iters;
  auto defect = op.apply(result.values);
  for (double& x : defect) {
    x -= h2;
  }

  BvpSolution out;
  out.n = n.value();
  out.radius = radius;
  out.boundary_value = beta;
  out.t.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    out.t[j] = j == m ? radius : op.rho(j);
  }
  out.r = std::move(result.values);
  out.newton_iters = result.iters;
  out.final_residual = detail::max_abs(defect);
  return out;
}

/// Initial iterate sqrt(n^2 + t^2) - n + c with c chosen to hit beta at R.
/// Its Taylor leading term is t^2/(2n) and it is spacelike for every R.
inline std::vector<double> hyperboloid_guess(Dimension n, double radius, double beta, std::size_t m) {
  const double nd = n.as_double();
  const auto h = [nd](double t) { return t * t / (std::sqrt(nd * nd + t * t) + nd); };
  const double shift = beta - h(radius);
  std::vector<double> r(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    r[j] = h(radius * static_cast<double>(j) / static_cast<double>(m)) + shift;
  }
  r[m] = beta;
  return r;
}

/// Cone iterate through (R, beta) with slope 0.9 beta / R.
inline std::vector<double> linear_guess(double radius, double beta, std::size_t m) {
  std::vector<double> r(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = radius * static_cast<double>(j) / static_cast<double>(m);
    r[j] = beta - 0.9 * beta * (radius - t) / radius;
  }
  r[m] = beta;
  return r;
}

/// Profile iterate r(t) + beta - r(R).
inline std::vector<double> profile_guess(const ProfileGrid& profile, double radius, double beta, std::size_t m) {
  const double shift = beta - profile.value_at(radius);
  std::vector<double> r(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = j == m ? radius : radius * static_cast<double>(j) / static_cast<double>(m);
    r[j] = profile.value_at(t) + shift;
  }
  r[m] = beta;
  return r;
}

/// Solves with the hyperboloid starting iterate.
inline BvpSolution solve_bvp(Dimension n, double radius, double beta, int m, const BvpOptions& opts = {}) {
  if (m < 16) {
    throw std::invalid_argument("solve_bvp: need at least 16 intervals");
  }
  detail::check_bvp_args(radius, static_cast<std::size_t>(m));
  return solve_bvp_from(n, radius, beta, hyperboloid_guess(n, radius, beta, static_cast<std::size_t>(m)), opts);
}

/// Solves starting from a computed profile, shifted to the Dirichlet datum.
inline BvpSolution solve_bvp(Dimension n, double radius, double beta, int m, const ProfileGrid& guess,
                             const BvpOptions& opts = {}) {
  if (m < 16) {
    throw std::invalid_argument("solve_bvp: need at least 16 intervals");
  }
  detail::check_bvp_args(radius, static_cast<std::size_t>(m));
  if (guess.dimension() != n) {
    throw std::invalid_argument("solve_bvp: guess profile has a different dimension");
  }
  return solve_bvp_from(n, radius, beta, profile_guess(guess, radius, beta, static_cast<std::size_t>(m)), opts);
}

/// Max |r_j - profile(t_j)| over the BVP nodes.
inline double max_deviation(const BvpSolution& sol, const ProfileGrid& profile) {
  double worst = 0.0;
  for (std::size_t j = 0; j < sol.r.size(); ++j) {
    worst = std::max(worst, std::abs(sol.r[j] - profile.value_at(sol.t[j])));
  }
  return worst;
}

struct UniquenessReport {
  int n = 1;
  double radius = 0.0;
  double boundary_value = 0.0;
  int iters_quadratic = 0;
  int iters_linear = 0;
  /// max_j |r^quadratic_j - r^linear_j|
  double discrepancy = 0.0;
  /// max_j |r^quadratic_j - r_ode(t_j)|, and the same for the linear start.
  double ode_error_quadratic = 0.0;
  double ode_error_linear = 0.0;
  double residual_quadratic = 0.0;
  double residual_linear = 0.0;
};

/// Dirichlet data beta = r_ode(R); Newton from two unrelated starting
/// iterates (hyperboloid and cone). Agreement of the limits with each other
/// and with the ODE profile is the numerical uniqueness evidence.
inline UniquenessReport uniqueness_check(Dimension n, double radius, int m, double ode_step = 1e-3) {
  if (m < 16) {
    throw std::invalid_argument("uniqueness_check: need at least 16 intervals");
  }
  detail::check_bvp_args(radius, static_cast<std::size_t>(m));
  SolverConfig cfg;
  cfg.horizon = radius;
  cfg.step = std::min(ode_step, radius / 20.0);
  const ProfileGrid ode = integrate_profile(n, cfg);
  const double beta = ode.value_at(radius);
  const auto mm = static_cast<std::size_t>(m);

  const BvpSolution a = solve_bvp_from(n, radius, beta, hyperboloid_guess(n, radius, beta, mm));
  const BvpSolution b = solve_bvp_from(n, radius, beta, linear_guess(radius, beta, mm));

  UniquenessReport rep;
  rep.n = n.value();
  rep.radius = radius;
  rep.boundary_value = beta;
  rep.iters_quadratic = a.newton_iters;
  rep.iters_linear = b.newton_iters;
  for (std::size_t j = 0; j < a.r.size(); ++j) {
    rep.discrepancy = std::max(rep.discrepancy, std::abs(a.r[j] - b.r[j]));
  }
  rep.ode_error_quadratic = max_deviation(a, ode);
  rep.ode_error_linear = max_deviation(b, ode);
  rep.residual_quadratic = a.final_residual;
  rep.residual_linear = b.final_residual;
  return rep;
}

}  // namespace soliton

#pragma once

// Radial mean curvature flow of spacelike graphs in Minkowski space.
//
// For V(x, tau) = V(|x|, tau) the graph flow
//     V_tau = sqrt(1 - |DV|^2) div(DV / sqrt(1 - |DV|^2))
// reduces to
//     V_tau = V_rr / (1 - V_r^2) + (n - 1) V_r / rho,
// with V_tau(0) = n V_rr(0) at the symmetry axis. A translating soliton
// V = r(rho) + tau moves at unit speed.

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

/// Safety factor in the explicit stability bound
/// dt <= kCflFactor * drho^2 * (1 - max V_rho^2).
inline constexpr double kCflFactor = 0.4;

struct FlowState {
  int n = 1;
  double radius = 1.0;
  /// Heights at rho_j = j R / m, j = 0 .. m.
  std::vector<double> values;
  double time = 0.0;
  double dt = 0.0;

  std::size_t intervals() const { return values.size() - 1; }
  double spacing() const { return radius / static_cast<double>(intervals()); }
  double rho(std::size_t j) const { return static_cast<double>(j) * spacing(); }

  /// Largest |(V_{j+1} - V_j) / drho|.
  double max_slope() const {
    const double h = spacing();
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
      worst = std::max(worst, std::abs((values[j + 1] - values[j]) / h));
    }
    return worst;
  }

  /// Largest explicit step allowed by the stability bound.
  double cfl_limit() const {
    const double s = max_slope();
    const double h = spacing();
    return kCflFactor * h * h * (1.0 - s) * (1.0 + s);
  }
};

namespace detail {

inline void require_spacelike(const FlowState& state, const char* where) {
  if (!(state.max_slope() < 1.0)) {
    throw SpacelikeViolation(std::string(where) + ": discrete slope reached |V_rho| >= 1");
  }
}

inline void check_state_shape(const FlowState& state) {
  if (state.values.size() < 3) {
    throw std::invalid_argument("FlowState needs at least two intervals");
  }
  if (state.n < 1) {
    throw std::invalid_argument("FlowState dimension must be >= 1");
  }
  if (!(state.radius > 0.0)) {
    throw std::invalid_argument("FlowState radius must be positive");
  }
}

}  // namespace detail

/// dV/dtau at rho_0 .. rho_{m-1} (origin plus interior; the Dirichlet node
/// rho_m is excluded).
inline std::vector<double> flow_rhs(const FlowState& state) {
  detail::check_state_shape(state);
  detail::require_spacelike(state, "flow_rhs");
  const std::size_t m = state.intervals();
  const double h = state.spacing();
  const double n = static_cast<double>(state.n);
  const auto& v = state.values;

  std::vector<double> out(m);
  out[0] = n * 2.0 * (v[1] - v[0]) / (h * h);
  for (std::size_t j = 1; j < m; ++j) {
    const double s = (v[j + 1] - v[j - 1]) / (2.0 * h);
    const double d2 = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
    out[j] = d2 / ((1.0 - s) * (1.0 + s)) + (n - 1.0) * s / state.rho(j);
  }
  return out;
}

/// Forward Euler step with the CFL guard; V_m is set to `boundary`.
inline FlowState step(const FlowState& state, double boundary) {
  detail::check_state_shape(state);
  if (!(state.dt >= 0.0)) {
    throw std::invalid_argument("step: dt must be >= 0");
  }
  if (state.dt == 0.0) {
    return state;
  }
  detail::require_spacelike(state, "step");
  const double limit = state.cfl_limit();
  if (state.dt > limit) {
    throw CflViolation("step: dt=" + std::to_string(state.dt) + " exceeds stability bound " +
                       std::to_string(limit));
  }
  const auto rate = flow_rhs(state);
  FlowState next = state;
  for (std::size_t j = 0; j < rate.size(); ++j) {
    next.values[j] += state.dt * rate[j];
  }
  next.values.back() = boundary;
  next.time += state.dt;
  detail::require_spacelike(next, "step");
  return next;
}

/// Backward Euler step: solves h^2 (V - V_old) / dt = L(V) for the new
/// heights by damped Newton, starting from the translate V_old + dt. The
/// nonlinear coefficient 1/(1 - V_rho^2) is evaluated at the new state, so
/// iterates are kept strictly spacelike. No CFL restriction.
inline FlowState step_implicit(const FlowState& state, double boundary) {
  detail::check_state_shape(state);
  if (!(state.dt >= 0.0)) {
    throw std::invalid_argument("step_implicit: dt must be >= 0");
  }
  if (state.dt == 0.0) {
    return state;
  }
  detail::require_spacelike(state, "step_implicit");
  const std::size_t m = state.intervals();
  const detail::RadialOperator op{static_cast<double>(state.n), state.spacing(), m};
  const double mass = op.h * op.h / state.dt;
  const auto& old = state.values;

  std::vector<double> offset(m);
  for (std::size_t j = 0; j < m; ++j) {
    offset[j] = -mass * old[j];
  }
  auto residual = [&](std::span<const double> v) { return op.residual(v, mass, offset, detail::RowForm::kCleared); };
  auto jacobian = [&](std::span<const double> v) { return op.jacobian(v, mass, offset, detail::RowForm::kCleared); };

  std::vector<double> start(old.size());
  std::transform(old.begin(), old.end(), start.begin(), [&](double x) { return x + state.dt; });
  start[m] = boundary;
  if (!detail::discretely_spacelike(start, op.h)) {
    start = old;
    start[m] = boundary;
  }
  detail::NewtonSettings opts;
  opts.residual_tolerance = 0.0;
  auto result = detail::damped_newton(std::move(start), op.h, residual, jacobian, opts, "step_implicit");

  FlowState next = state;
  next.values = std::move(result.values);
  next.time += state.dt;
  return next;
}

enum class FlowScheme { kExplicit, kImplicit };

/// Samples of the profile at rho_j = j R / m.
inline std::vector<double> sample_profile(const ProfileGrid& profile, double radius, std::size_t m) {
  std::vector<double> v(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double rho = j == m ? radius : radius * static_cast<double>(j) / static_cast<double>(m);
    v[j] = profile.value_at(rho);
  }
  return v;
}

struct InvarianceOptions {
  FlowScheme scheme = FlowScheme::kImplicit;
  /// Implicit scheme: dt = dt_factor * drho^2 unless `dt` is set.
  double dt_factor = 32.0;
  /// Explicit scheme: dt = cfl_fraction * (stability bound at tau = 0)
  /// unless `dt` is set.
  double cfl_fraction = 0.9;
  double dt = 0.0;
  /// Moving Dirichlet datum r(R) + tau; false freezes it at r(R).
  bool moving_boundary = true;
  double profile_step = 1e-3;
};

struct InvarianceReport {
  int n = 1;
  double radius = 0.0;
  std::size_t intervals = 0;
  double end_time = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  /// sup over steps and nodes of |V_j(tau) - r(rho_j) - tau|.
  double sup_error = 0.0;
  /// Signed error V - r - tau at the node next to the boundary, final time.
  double final_boundary_error = 0.0;
  /// Signed mean of V - r - tau at the final time.
  double final_mean_error = 0.0;
};

/// Evolves the computed soliton profile and measures its deviation from the
/// exact translate r + tau.
inline InvarianceReport soliton_invariance_test(Dimension n, double radius, int m, double end_time,
                                                const InvarianceOptions& opts = {}) {
  if (m < 2) {
    throw std::invalid_argument("soliton_invariance_test: need at least 2 intervals");
  }
  if (!(radius > 0.0) || !(end_time >= 0.0)) {
    throw std::invalid_argument("soliton_invariance_test: radius > 0 and end_time >= 0 required");
  }
  SolverConfig cfg;
  cfg.horizon = radius;
  cfg.step = std::min(opts.profile_step, radius / 20.0);
  const ProfileGrid profile = integrate_profile(n, cfg);
  const auto mm = static_cast<std::size_t>(m);
  const std::vector<double> base = sample_profile(profile, radius, mm);

  FlowState state;
  state.n = n.value();
  state.radius = radius;
  state.values = base;
  const double h = state.spacing();
  double dt = opts.dt;
  if (!(dt > 0.0)) {
    dt = opts.scheme == FlowScheme::kImplicit ? opts.dt_factor * h * h : opts.cfl_fraction * state.cfl_limit();
  }

  InvarianceReport rep;
  rep.n = n.value();
  rep.radius = radius;
  rep.intervals = mm;
  rep.end_time = end_time;
  rep.dt = dt;

  std::size_t steps = 0;
  while (state.time < end_time) {
    const double remaining = end_time - state.time;
    state.dt = remaining < dt * (1.0 + 1e-9) ? remaining : dt;
    const double tau_next = state.time + state.dt;
    const double boundary = base[mm] + (opts.moving_boundary ? tau_next : 0.0);
    state = opts.scheme == FlowScheme::kImplicit ? step_implicit(state, boundary) : step(state, boundary);
    if (remaining < dt * (1.0 + 1e-9)) {
      state.time = end_time;
    }
    ++steps;
    for (std::size_t j = 0; j <= mm; ++j) {
      rep.sup_error = std::max(rep.sup_error, std::abs(state.values[j] - base[j] - state.time));
    }
  }
  rep.steps = steps;
  if (mm >= 1) {
    rep.final_boundary_error = state.values[mm - 1] - base[mm - 1] - state.time;
  }
  double mean = 0.0;
  for (std::size_t j = 0; j <= mm; ++j) {
    mean += state.values[j] - base[j] - state.time;
  }
  rep.final_mean_error = mean / static_cast<double>(mm + 1);
  return rep;
}

}  // namespace soliton

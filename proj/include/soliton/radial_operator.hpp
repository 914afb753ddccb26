#pragma once

// Discrete radial soliton operator and a damped Newton driver shared by the
// Dirichlet solver and the implicit flow stepper.
//
// On rho_j = j h, j = 0 .. m, the operator value at j = 0 .. m-1 is
//
//     L_j = h^2 [ V_rr / (1 - V_r^2) + (n - 1) V_r / rho ]     (j >= 1)
//     L_0 = h^2 [ n V_rr(0) ] = 2 n (V_1 - V_0)                  (even ghost node)
//
// with central differences. Values are kept in second-difference units
// (multiplied by h^2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "soliton/errors.hpp"
#include "soliton/tridiagonal.hpp"

namespace soliton::detail {

inline bool discretely_spacelike(std::span<const double> v, double h) {
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    if (!(std::abs((v[j + 1] - v[j]) / h) < 1.0)) {
      return false;
    }
  }
  return true;
}

inline double max_abs(std::span<const double> v) {
  double worst = 0.0;
  for (double x : v) {
    worst = std::max(worst, std::abs(x));
  }
  return worst;
}

inline double sum_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  return s;
}

struct Tridiagonal {
  std::vector<double> lower, diag, upper;
};

/// Two equivalent row forms for L_j = c_j with source c_j = mass V_j + offset_j:
///
///   plain:    F_j = L_j - c_j
///   cleared:  R_j = d2_j + (1 - s_j^2) [ (n - 1) s_j h^2 / rho_j - c_j ]
///
/// (row 0 is 2 n (V_1 - V_0) - c_0 in both), where d2_j = V_{j+1} - 2 V_j + V_{j-1}
/// and s_j is the central slope. The cleared form is L_j - c_j multiplied by
/// 1 - s_j^2 > 0; it avoids amplifying round-off in d2 when slopes approach 1
/// but its Jacobian is poorly conditioned far from a solution with steep
/// slopes near the axis. The plain form is the robust one for crude iterates.
enum class RowForm { kPlain, kCleared };

struct RadialOperator {
  double n;
  double h;
  std::size_t m;

  double rho(std::size_t j) const { return static_cast<double>(j) * h; }

  /// L_j for j = 0 .. m-1; `v` has m+1 entries.
  std::vector<double> apply(std::span<const double> v) const {
    std::vector<double> out(m);
    out[0] = 2.0 * n * (v[1] - v[0]);
    for (std::size_t j = 1; j < m; ++j) {
      const double s = (v[j + 1] - v[j - 1]) / (2.0 * h);
      const double d2 = v[j + 1] - 2.0 * v[j] + v[j - 1];
      out[j] = d2 / ((1.0 - s) * (1.0 + s)) + (n - 1.0) * s * h * h / rho(j);
    }
    return out;
  }

  std::vector<double> residual(std::span<const double> v, double mass, std::span<const double> offset,
                               RowForm form) const {
    std::vector<double> out(m);
    out[0] = 2.0 * n * (v[1] - v[0]) - (mass * v[0] + offset[0]);
    for (std::size_t j = 1; j < m; ++j) {
      const double s = (v[j + 1] - v[j - 1]) / (2.0 * h);
      const double d2 = v[j + 1] - 2.0 * v[j] + v[j - 1];
      const double q = (n - 1.0) * s * h * h / rho(j) - (mass * v[j] + offset[j]);
      const double spacelike = (1.0 - s) * (1.0 + s);
      out[j] = form == RowForm::kCleared ? d2 + spacelike * q : d2 / spacelike + q;
    }
    return out;
  }

  /// Derivatives of the rows with respect to V_0 .. V_{m-1} (V_m is data).
  Tridiagonal jacobian(std::span<const double> v, double mass, std::span<const double> offset,
                       RowForm form) const {
    Tridiagonal jac{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    jac.diag[0] = -2.0 * n - mass;
    jac.upper[0] = 2.0 * n;
    for (std::size_t j = 1; j < m; ++j) {
      const double s = (v[j + 1] - v[j - 1]) / (2.0 * h);
      const double d2 = v[j + 1] - 2.0 * v[j] + v[j - 1];
      const double drift = (n - 1.0) * h * h / rho(j);
      const double spacelike = (1.0 - s) * (1.0 + s);
      // ds/dV_{j+-1} = +-1/(2h)
      if (form == RowForm::kCleared) {
        const double q = drift * s - (mass * v[j] + offset[j]);
        const double via_slope = (-2.0 * s * q + spacelike * drift) / (2.0 * h);
        jac.lower[j] = 1.0 - via_slope;
        jac.diag[j] = -2.0 - spacelike * mass;
        jac.upper[j] = 1.0 + via_slope;
      } else {
        const double a = 1.0 / spacelike;
        const double via_slope = (2.0 * s * a * a * d2 + drift) / (2.0 * h);
        jac.lower[j] = a - via_slope;
        jac.diag[j] = -2.0 * a - mass;
        jac.upper[j] = a + via_slope;
      }
    }
    return jac;
  }
};

struct NewtonSettings {
  int max_iters = 50;
  double damping_floor = 0x1p-20;
  double step_tolerance = 1e-12;
  double residual_tolerance = 1e-15;
};

struct NewtonOutcome {
  std::vector<double> values;
  std::vector<double> residual;
  int iters = 0;
};

/// Damped Newton on G(v) = 0 over the first m entries of v (v[m] is fixed).
/// Steps are halved until the iterate is discretely spacelike and the
/// squared residual decreases. Stagnation at round-off level counts as
/// converged; otherwise exhausting the damping floor throws.
template <class ResidualFn, class JacobianFn>
NewtonOutcome damped_newton(std::vector<double> v, double h, ResidualFn&& residual, JacobianFn&& jacobian,
                            const NewtonSettings& opts, const char* who) {
  const std::size_t m = v.size() - 1;
  if (!discretely_spacelike(v, h)) {
    throw SpacelikeViolation(std::string(who) + ": initial iterate is not spacelike");
  }
  std::vector<double> g = residual(std::span<const double>(v));
  double merit = sum_squares(g);
  int iters = 0;
  bool converged = max_abs(g) <= opts.residual_tolerance;
  std::vector<double> trial(v.size());
  std::vector<double> g_trial;

  while (!converged) {
    if (iters >= opts.max_iters) {
      throw NoConvergence(std::string(who) + ": no convergence after " + std::to_string(iters) +
                          " Newton iterations");
    }
    const Tridiagonal jac = jacobian(std::span<const double>(v));
    std::vector<double> neg_g(m);
    std::transform(g.begin(), g.end(), neg_g.begin(), [](double x) { return -x; });
    const std::vector<double> delta = solve_tridiagonal(jac.lower, jac.diag, jac.upper, neg_g);
    const double delta_norm = max_abs(delta);

    double lambda = 1.0;
    bool accepted = false;
    bool saw_spacelike = false;
    while (lambda >= opts.damping_floor) {
      for (std::size_t j = 0; j < m; ++j) {
        trial[j] = v[j] + lambda * delta[j];
      }
      trial[m] = v[m];
      if (discretely_spacelike(trial, h)) {
        saw_spacelike = true;
        g_trial = residual(std::span<const double>(trial));
        const double merit_trial = sum_squares(g_trial);
        if (merit_trial < merit) {
          accepted = true;
          merit = merit_trial;
          break;
        }
      }
      lambda *= 0.5;
    }
    ++iters;

    if (!accepted) {
      // Residual at round-off level: take the (negligible) full step and stop.
      if (delta_norm <= 1e3 * opts.step_tolerance * (1.0 + max_abs(v))) {
        for (std::size_t j = 0; j < m; ++j) {
          trial[j] = v[j] + delta[j];
        }
        trial[m] = v[m];
        if (discretely_spacelike(trial, h)) {
          v.swap(trial);
          g = residual(std::span<const double>(v));
        }
        break;
      }
      if (!saw_spacelike) {
        throw SpacelikeViolation(std::string(who) + ": damping floor reached without a spacelike iterate");
      }
      throw NoConvergence(std::string(who) + ": residual could not be reduced (damping floor reached)");
    }
    v.swap(trial);
    g.swap(g_trial);
    converged = lambda * delta_norm <= opts.step_tolerance * (1.0 + max_abs(v)) ||
                max_abs(g) <= opts.residual_tolerance;
  }
  return {std::move(v), std::move(g), iters};
}

}  // namespace soliton::detail

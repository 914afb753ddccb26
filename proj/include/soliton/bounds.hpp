#pragma once

// A-priori inequalities satisfied by the soliton profile, evaluated node by
// node on a computed grid, plus discrete residual and refinement checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "soliton/profile.hpp"

namespace soliton {

/// Default slack for the closed inequalities.
inline constexpr double kBoundTolerance = 1e-10;

struct BoundCheck {
  std::string name;
  /// Smallest (signed) margin over the grid; negative means violated.
  double worst_margin = std::numeric_limits<double>::infinity();
  /// Node time where the worst margin occurred.
  double worst_t = 0.0;
  bool strict = false;
  bool pass = true;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
  }

  const BoundCheck* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) {
        return &c;
      }
    }
    return nullptr;
  }
};

namespace detail {

class MarginTracker {
 public:
  MarginTracker(std::string name, bool strict, double tol) : tol_(tol) {
    check_.name = std::move(name);
    check_.strict = strict;
  }

  void observe(double margin, double t) {
    if (std::isnan(margin) || margin < check_.worst_margin) {
      check_.worst_margin = margin;
      check_.worst_t = t;
    }
  }

  BoundCheck finish() {
    const double m = check_.worst_margin;
    check_.pass = check_.strict ? (m > 0.0) : (m >= -tol_);
    return check_;
  }

 private:
  BoundCheck check_;
  double tol_;
};

// sqrt(n^2 + t^2) - n without cancellation.
inline double hyperboloid(double n, double t) { return t * t / (std::sqrt(n * n + t * t) + n); }

}  // namespace detail

/// Checks, at every node of an eps = 0 grid:
///   t / sqrt(n^2 + t^2) <= r' < 1,   0 < r'' <= 1,
///   sqrt(n^2 + t^2) - n <= r <= t,
/// and discrete monotonicity/convexity of the sampled r.
///
/// Strict inequalities are evaluated exactly in floating point: r' < 1 via
/// the slope deficit 1 - r' > 0 (from the rapidity), r'' > 0 directly.
inline BoundsReport check_bounds(const ProfileGrid& grid, double tol = kBoundTolerance) {
  const double n = grid.dimension().as_double();
  detail::MarginTracker slope_lower("slope_lower", false, tol);
  detail::MarginTracker slope_upper("slope_upper_strict", true, tol);
  detail::MarginTracker curv_pos("curvature_positive", true, tol);
  detail::MarginTracker curv_upper("curvature_upper", false, tol);
  detail::MarginTracker sand_lower("sandwich_lower", false, tol);
  detail::MarginTracker sand_upper("sandwich_upper", false, tol);
  detail::MarginTracker monotone("discrete_monotone", false, tol);
  detail::MarginTracker convex("discrete_convex", false, tol);

  const auto nodes = grid.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& p = nodes[i];
    slope_lower.observe(p.dr - p.t / std::sqrt(n * n + p.t * p.t), p.t);
    slope_upper.observe(p.slope_deficit(), p.t);
    curv_pos.observe(p.d2r, p.t);
    curv_upper.observe(1.0 - p.d2r, p.t);
    sand_lower.observe(p.r - detail::hyperboloid(n, p.t), p.t);
    sand_upper.observe(p.t - p.r, p.t);
    if (i + 1 < nodes.size()) {
      monotone.observe(nodes[i + 1].r - p.r, p.t);
    }
    if (i > 0 && i + 1 < nodes.size()) {
      const auto& a = nodes[i - 1];
      const auto& b = nodes[i + 1];
      convex.observe((b.r - p.r) / (b.t - p.t) - (p.r - a.r) / (p.t - a.t), p.t);
    }
  }
  return {{slope_lower.finish(), slope_upper.finish(), curv_pos.finish(), curv_upper.finish(),
           sand_lower.finish(), sand_upper.finish(), monotone.finish(), convex.finish()}};
}

/// Bounds of the regularized family:
///   eps/n <= r' < 1,   t eps/n <= r <= t,
///   0 < r'' <= 1 - (n-1) eps / (n (t + eps)).
inline BoundsReport check_regularized_bounds(const ProfileGrid& grid, double tol = kBoundTolerance) {
  const double n = grid.dimension().as_double();
  const double eps = grid.epsilon();
  detail::MarginTracker slope_lower("slope_lower_eps", false, tol);
  detail::MarginTracker slope_upper("slope_upper_strict", true, tol);
  detail::MarginTracker value_lower("value_lower_eps", false, tol);
  detail::MarginTracker value_upper("value_upper", false, tol);
  detail::MarginTracker curv_pos("curvature_positive", true, tol);
  detail::MarginTracker curv_upper("curvature_upper_eps", false, tol);
  for (const auto& p : grid.nodes()) {
    slope_lower.observe(p.dr - eps / n, p.t);
    slope_upper.observe(p.slope_deficit(), p.t);
    value_lower.observe(p.r - p.t * eps / n, p.t);
    value_upper.observe(p.t - p.r, p.t);
    curv_pos.observe(p.d2r, p.t);
    curv_upper.observe(1.0 - (n - 1.0) * eps / (n * (p.t + eps)) - p.d2r, p.t);
  }
  return {{slope_lower.finish(), slope_upper.finish(), value_lower.finish(), value_upper.finish(),
           curv_pos.finish(), curv_upper.finish()}};
}

// ---------------------------------------------------------------------------
// Residual and refinement

/// Max over interior stepper nodes of
///   | r'' / (1 - r'^2) + (n - 1) r' / t - 1 |,
/// with r'' / (1 - r'^2) = d/dt atanh(r') taken by the fourth-order
/// five-point difference of the stored rapidity. Nodes inside the series
/// launch region, below `t_min`, and in the (possibly shortened) final
/// interval are skipped.
inline double max_residual(const ProfileGrid& grid, double t_min = 0.0) {
  const auto nodes = grid.nodes();
  const double h = grid.config().step;
  const double n = grid.dimension().as_double();
  const double eps = grid.epsilon();
  const double t_start =
      std::max(t_min, eps > 0.0 ? 0.0 : grid.config().effective_launch_radius());
  double worst = 0.0;
  for (std::size_t i = 2; i + 3 < nodes.size(); ++i) {
    if (nodes[i - 2].t < t_start * (1.0 - 1e-12)) {
      continue;
    }
    const double dtheta = (-nodes[i + 2].rapidity + 8.0 * nodes[i + 1].rapidity -
                           8.0 * nodes[i - 1].rapidity + nodes[i - 2].rapidity) /
                          (12.0 * h);
    const double res = dtheta + (n - 1.0) * nodes[i].dr / (nodes[i].t + eps) - 1.0;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

struct OrderEstimate {
  double coarse = 0.0;  // quantity at step h
  double fine = 0.0;    // quantity at step h/2
  double ratio() const { return coarse / fine; }
  double order() const { return std::log2(ratio()); }
};

/// Max residual on [t_min, horizon] at steps h and h/2 (same launch radius).
inline OrderEstimate residual_order(Dimension n, double horizon, double h, double t_min = 1.0) {
  SolverConfig coarse{horizon, h, 0.0, 10.0 * h};
  SolverConfig fine{horizon, 0.5 * h, 0.0, 10.0 * h};
  return {max_residual(integrate_profile(n, coarse), t_min),
          max_residual(integrate_profile(n, fine), t_min)};
}

/// Grid Cauchy property: sup |r_h - r_{h/2}| over common nodes, and the
/// same for h/2 against h/4. Fourth order gives a ratio near 16.
inline OrderEstimate cauchy_refinement(Dimension n, double horizon, double h) {
  const double t0 = 10.0 * h;
  const auto g1 = integrate_profile(n, {horizon, h, 0.0, t0});
  const auto g2 = integrate_profile(n, {horizon, 0.5 * h, 0.0, t0});
  const auto g4 = integrate_profile(n, {horizon, 0.25 * h, 0.0, t0});
  double d12 = 0.0;
  double d24 = 0.0;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    const std::size_t j = std::min(2 * i, g2.size() - 1);
    const std::size_t k = std::min(4 * i, g4.size() - 1);
    if (g1[i].t != g2[j].t || g1[i].t != g4[k].t) {
      continue;
    }
    d12 = std::max(d12, std::abs(g1[i].r - g2[j].r));
    d24 = std::max(d24, std::abs(g2[j].r - g4[k].r));
  }
  return {d12, d24};
}

}  // namespace soliton

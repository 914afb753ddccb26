#pragma once

// Radial profile of the rotationally symmetric translating soliton.
//
// The profile r(t) solves the singular initial value problem
//
//     r'' / (1 - r'^2) + (n - 1) r' / t = 1,    r(0) = r'(0) = 0,
//
// and u(x) = r(|x|) is the spacelike translator. The regularized family
// replaces (n - 1)/t by (n - 1)/(t + eps) and starts from r'(0) = eps/n.
//
// Integration is carried out on (r, theta) with theta = atanh(r'), the
// rapidity of the slope. In these variables the equation reads
//
//     r' = tanh(theta),    theta' = 1 - (n - 1) tanh(theta) / (t + eps),
//
// which is smooth, keeps |r'| < 1 by construction, and lets the slope
// deficit 1 - r' and the curvature r'' = theta' sech^2(theta) be evaluated
// without cancellation even where r' rounds to 1 in double precision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "soliton/dimension.hpp"
#include "soliton/errors.hpp"
#include "soliton/interpolation.hpp"

namespace soliton {

/// Integrator controls. A launch radius of 0 selects the default
/// max(10 h, 1e-3).
struct SolverConfig {
  double horizon = 20.0;
  double step = 1e-3;
  double epsilon = 0.0;
  double launch_radius = 0.0;

  double effective_launch_radius() const {
    return launch_radius > 0.0 ? launch_radius : std::max(10.0 * step, 1e-3);
  }

  void validate() const {
    const double t0 = effective_launch_radius();
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw std::invalid_argument("step must be positive and finite");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      throw std::invalid_argument("horizon must be positive and finite");
    }
    if (!(step < t0 && t0 < horizon)) {
      throw std::invalid_argument("config requires 0 < step < launch_radius < horizon");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
      throw std::invalid_argument("epsilon must lie in [0, 1)");
    }
  }
};

/// One grid node. `rapidity` is atanh(dr); it carries the slope where dr
/// itself has rounded to 1.
struct ProfileNode {
  double t = 0.0;
  double r = 0.0;
  double dr = 0.0;
  double d2r = 0.0;
  double rapidity = 0.0;

  /// 1 - r', accurate to full relative precision for large rapidity.
  double slope_deficit() const {
    if (rapidity <= 0.0) {
      return 1.0 - dr;
    }
    const double e = std::exp(-2.0 * rapidity);
    return 2.0 * e / (1.0 + e);
  }
};

/// (r, r', r'') triple returned by the series and closed-form oracles.
struct ProfileValue {
  double r;
  double dr;
  double d2r;
};

// ---------------------------------------------------------------------------
// Right-hand sides

/// Second derivative implied by the profile equation:
/// (1 - (n-1) s / (t + eps)) (1 - s^2).
inline double rhs(double t, double s, Dimension n, double eps) {
  if (!(std::abs(s) < 1.0)) {
    throw std::domain_error("rhs: slope must satisfy |s| < 1");
  }
  const double spacelike = (1.0 - s) * (1.0 + s);
  if (n.value() == 1) {
    return spacelike;
  }
  const double shifted = t + eps;
  if (!(shifted > 0.0)) {
    throw std::domain_error("rhs: t + eps must be positive when n >= 2");
  }
  return (1.0 - (n.as_double() - 1.0) * s / shifted) * spacelike;
}

/// theta' = r'' / (1 - r'^2) as a function of the rapidity.
inline double rapidity_rhs(double t, double theta, Dimension n, double eps) {
  if (n.value() == 1) {
    return 1.0;
  }
  const double shifted = t + eps;
  if (!(shifted > 0.0)) {
    throw std::domain_error("rapidity_rhs: t + eps must be positive when n >= 2");
  }
  return 1.0 - (n.as_double() - 1.0) * std::tanh(theta) / shifted;
}

/// 1 - tanh^2(theta) without cancellation.
inline double sech_squared(double theta) {
  const double e = std::exp(-2.0 * std::abs(theta));
  const double denom = 1.0 + e;
  return 4.0 * e / (denom * denom);
}

/// r'' evaluated from the rapidity form of the equation.
inline double curvature_from_rapidity(double t, double theta, Dimension n, double eps) {
  return rapidity_rhs(t, theta, n, eps) * sech_squared(theta);
}

// ---------------------------------------------------------------------------
// Oracles

/// Even power series about the singular point:
///   r = t^2/(2n) - t^4/(4 n^3 (n+2)) + (3-n) t^6/(6 n^5 (n+2)(n+4)) + O(t^8).
/// The t^6 term keeps the slope error O(t^7); for n = 1 a launch slope
/// error never decays.
inline ProfileValue taylor_launch(Dimension n, double t) {
  const double nd = n.as_double();
  const double n3 = nd * nd * nd;
  const double c4 = 1.0 / (4.0 * n3 * (nd + 2.0));
  const double c6 = (3.0 - nd) / (6.0 * n3 * nd * nd * (nd + 2.0) * (nd + 4.0));
  const double t2 = t * t;
  const double t4 = t2 * t2;
  return {
      t2 / (2.0 * nd) - c4 * t4 + c6 * t4 * t2,
      t / nd - 4.0 * c4 * t2 * t + 6.0 * c6 * t4 * t,
      1.0 / nd - 12.0 * c4 * t2 + 30.0 * c6 * t4,
  };
}

/// Exact profile for n = 1: r = ln cosh t.
inline ProfileValue closed_form_n1(double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("closed_form_n1: t must be >= 0");
  }
  // ln cosh t = t + log1p(exp(-2t)) - ln 2, stable for large t.
  const double r = t + std::log1p(std::exp(-2.0 * t)) - std::log(2.0);
  const double c = std::cosh(t);
  return {r, std::tanh(t), 1.0 / (c * c)};
}

// ---------------------------------------------------------------------------
// Grid

class ProfileGrid {
 public:
  ProfileGrid(Dimension n, SolverConfig config, std::vector<ProfileNode> nodes)
      : n_(n), config_(config), nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
      throw std::invalid_argument("ProfileGrid needs at least two nodes");
    }
    t_.reserve(nodes_.size());
    r_.reserve(nodes_.size());
    dr_.reserve(nodes_.size());
    theta_.reserve(nodes_.size());
    dtheta_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& node = nodes_[i];
      if (i > 0 && !(node.t > nodes_[i - 1].t)) {
        throw std::invalid_argument("ProfileGrid nodes must be strictly increasing in t");
      }
      t_.push_back(node.t);
      r_.push_back(node.r);
      dr_.push_back(node.dr);
      theta_.push_back(node.rapidity);
      dtheta_.push_back(node.t > 0.0 || config_.epsilon > 0.0
                            ? rapidity_rhs(node.t, node.rapidity, n_, config_.epsilon)
                            : node.d2r);
    }
  }

  Dimension dimension() const { return n_; }
  const SolverConfig& config() const { return config_; }
  std::span<const ProfileNode> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const ProfileNode& operator[](std::size_t i) const { return nodes_[i]; }
  const ProfileNode& front() const { return nodes_.front(); }
  const ProfileNode& back() const { return nodes_.back(); }
  double horizon() const { return nodes_.back().t; }
  double epsilon() const { return config_.epsilon; }

  /// r(t) by monotone cubic interpolation.
  double value_at(double t) const {
    check_range(t);
    return hermite_eval(t_, r_, dr_, t).value;
  }

  /// Rapidity atanh(r'(t)), interpolated with theta' as nodal derivative.
  double rapidity_at(double t) const {
    check_range(t);
    return hermite_eval(t_, theta_, dtheta_, t).value;
  }

  double slope_at(double t) const { return std::tanh(rapidity_at(t)); }

 private:
  void check_range(double t) const {
    if (!(t >= nodes_.front().t && t <= nodes_.back().t)) {
      throw OutOfRange("profile evaluation at t=" + std::to_string(t) +
                       " outside [0, " + std::to_string(nodes_.back().t) + "]");
    }
  }

  Dimension n_;
  SolverConfig config_;
  std::vector<ProfileNode> nodes_;
  std::vector<double> t_, r_, dr_, theta_, dtheta_;
};

// ---------------------------------------------------------------------------
// Integration

namespace detail {

struct RadialState {
  double r;
  double theta;
};

inline RadialState radial_derivative(double t, RadialState y, Dimension n, double eps) {
  return {std::tanh(y.theta), rapidity_rhs(t, y.theta, n, eps)};
}

/// Classical fourth-order Runge-Kutta increment.
inline RadialState rk4_increment(double t, RadialState y, double h, Dimension n, double eps) {
  const auto k1 = radial_derivative(t, y, n, eps);
  const auto k2 = radial_derivative(t + 0.5 * h, {y.r + 0.5 * h * k1.r, y.theta + 0.5 * h * k1.theta}, n, eps);
  const auto k3 = radial_derivative(t + 0.5 * h, {y.r + 0.5 * h * k2.r, y.theta + 0.5 * h * k2.theta}, n, eps);
  const auto k4 = radial_derivative(t + h, {y.r + h * k3.r, y.theta + h * k3.theta}, n, eps);
  return {h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
          h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta)};
}

// Kahan-compensated accumulator; long runs add ~1e6 small increments.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

inline std::size_t interval_count(double horizon, double step) {
  const double ratio = horizon / step;
  auto count = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * ratio));
  return std::max<std::size_t>(count, 1);
}

inline double node_time(std::size_t i, std::size_t count, double step, double horizon) {
  return i == count ? horizon : static_cast<double>(i) * step;
}

inline ProfileNode make_node(double t, double r, double theta, Dimension n, double eps) {
  if (!std::isfinite(theta) || !std::isfinite(r) || theta < 0.0) {
    throw StepFailure("slope left [0, 1) at t=" + std::to_string(t));
  }
  return {t, r, std::tanh(theta), curvature_from_rapidity(t, theta, n, eps), theta};
}

// Steps from node `start` (whose state is given) to the horizon, appending.
inline void march(std::vector<ProfileNode>& nodes, std::size_t start, RadialState y, Dimension n,
                  const SolverConfig& cfg) {
  const std::size_t count = interval_count(cfg.horizon, cfg.step);
  CompensatedSum r{y.r, 0.0};
  CompensatedSum theta{y.theta, 0.0};
  for (std::size_t i = start; i < count; ++i) {
    const double t = node_time(i, count, cfg.step, cfg.horizon);
    const double t_next = node_time(i + 1, count, cfg.step, cfg.horizon);
    const auto inc = rk4_increment(t, {r.sum, theta.sum}, t_next - t, n, cfg.epsilon);
    r.add(inc.r);
    theta.add(inc.theta);
    nodes.push_back(make_node(t_next, r.sum, theta.sum, n, cfg.epsilon));
  }
}

}  // namespace detail

/// Solution of the singular problem (eps = 0): series on [0, t0], then RK4.
inline ProfileGrid integrate_profile(Dimension n, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.epsilon != 0.0) {
    throw std::invalid_argument("integrate_profile requires epsilon = 0");
  }
  const std::size_t count = detail::interval_count(cfg.horizon, cfg.step);
  const double t0 = cfg.effective_launch_radius();

  std::vector<ProfileNode> nodes;
  nodes.reserve(count + 1);
  std::size_t launch = 0;
  for (std::size_t i = 0; i <= count; ++i) {
    const double t = detail::node_time(i, count, cfg.step, cfg.horizon);
    if (t > t0 * (1.0 + 1e-12)) {
      break;
    }
    const auto v = taylor_launch(n, t);
    nodes.push_back({t, v.r, v.dr, v.d2r, std::atanh(v.dr)});
    launch = i;
  }
  const auto& last = nodes.back();
  detail::march(nodes, launch, {last.r, last.rapidity}, n, cfg);
  return ProfileGrid(n, cfg, std::move(nodes));
}

/// Regularized problem: starts at t = 0 from r = 0, r' = eps/n.
inline ProfileGrid integrate_regularized(Dimension n, const SolverConfig& cfg) {
  cfg.validate();
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("integrate_regularized requires 0 < epsilon < 1");
  }
  const std::size_t count = detail::interval_count(cfg.horizon, cfg.step);
  std::vector<ProfileNode> nodes;
  nodes.reserve(count + 1);
  const double theta0 = std::atanh(cfg.epsilon / n.as_double());
  nodes.push_back(detail::make_node(0.0, 0.0, theta0, n, cfg.epsilon));
  detail::march(nodes, 0, {0.0, theta0}, n, cfg);
  return ProfileGrid(n, cfg, std::move(nodes));
}

/// Dispatches on cfg.epsilon.
inline ProfileGrid integrate(Dimension n, const SolverConfig& cfg) {
  return cfg.epsilon > 0.0 ? integrate_regularized(n, cfg) : integrate_profile(n, cfg);
}

// ---------------------------------------------------------------------------
// eps -> 0 extrapolation

struct EpsExtrapolation {
  ProfileGrid grid;
  /// Empirical order p in |r_eps - r_0| ~ C eps^p from the three smallest
  /// eps; NaN when fewer than three grids were computed.
  double order = std::numeric_limits<double>::quiet_NaN();
  /// Sup-norm differences between consecutive regularized grids.
  std::vector<double> successive_differences;
};

namespace detail {

inline double sup_difference(const ProfileGrid& a, const ProfileGrid& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i].r - b[i].r));
  }
  return worst;
}

}  // namespace detail

/// Linear-in-eps Richardson extrapolation of regularized grids to eps = 0,
/// using the two smallest entries of `eps_list` (which must be decreasing).
inline EpsExtrapolation extrapolate_eps(Dimension n, const SolverConfig& cfg,
                                        std::span<const double> eps_list) {
  if (eps_list.size() < 2) {
    throw std::invalid_argument("extrapolate_eps needs at least two epsilon values");
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0)) {
      throw std::invalid_argument("extrapolate_eps: every epsilon must lie in (0, 1)");
    }
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw std::invalid_argument("extrapolate_eps: epsilon list must be strictly decreasing");
    }
  }

  std::vector<ProfileGrid> grids;
  grids.reserve(eps_list.size());
  for (double eps : eps_list) {
    SolverConfig c = cfg;
    c.epsilon = eps;
    grids.push_back(integrate_regularized(n, c));
  }

  std::vector<double> diffs;
  for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
    diffs.push_back(detail::sup_difference(grids[i], grids[i + 1]));
  }
  double order = std::numeric_limits<double>::quiet_NaN();
  if (grids.size() >= 3) {
    const std::size_t k = grids.size() - 3;
    const double q = eps_list[k] / eps_list[k + 1];
    order = std::log(diffs[k] / diffs[k + 1]) / std::log(q);
  }

  const std::size_t b = grids.size() - 1;
  const std::size_t a = b - 1;
  const double ea = eps_list[a];
  const double eb = eps_list[b];
  const auto extrap = [&](double va, double vb) { return (ea * vb - eb * va) / (ea - eb); };

  SolverConfig out_cfg = cfg;
  out_cfg.epsilon = 0.0;
  std::vector<ProfileNode> nodes;
  nodes.reserve(grids[b].size());
  for (std::size_t i = 0; i < grids[b].size(); ++i) {
    const double t = grids[b][i].t;
    const double r = extrap(grids[a][i].r, grids[b][i].r);
    const double theta = extrap(grids[a][i].rapidity, grids[b][i].rapidity);
    const double d2r = t > 0.0 ? curvature_from_rapidity(t, theta, n, 0.0) : 1.0 / n.as_double();
    nodes.push_back({t, r, std::tanh(theta), d2r, theta});
  }
  return {ProfileGrid(n, out_cfg, std::move(nodes)), order, std::move(diffs)};
}

}  // namespace soliton

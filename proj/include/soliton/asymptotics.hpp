#pragma once

// Behaviour of the radial soliton u(x) = r(|x|) at infinity: the rescalings
// u_rho(x) = u(rho x) / rho, their distance to the cone |x|, the 1-Lipschitz
// and null properties of the limit, and the slope deficit at the horizon.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "soliton/errors.hpp"
#include "soliton/profile.hpp"

namespace soliton {

/// Point of a two-dimensional section through the origin. A radial function
/// restricted to any plane containing a pair of points determines their
/// values, so pairs can be sampled in 2-D without loss.
using SectionPoint = std::array<double, 2>;

namespace detail {

inline double norm(const SectionPoint& p) { return std::hypot(p[0], p[1]); }

inline double distance(const SectionPoint& a, const SectionPoint& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

/// u_rho at a point of norm `x_norm` >= 0.
inline double rescaled(const ProfileGrid& profile, double x_norm, double rho) {
  const double t = rho * x_norm;
  if (t > profile.horizon()) {
    throw OutOfRange("blowdown evaluation at rho|x|=" + std::to_string(t) + " beyond horizon " +
                     std::to_string(profile.horizon()));
  }
  return profile.value_at(t) / rho;
}

}  // namespace detail

/// r(rho x_norm) / rho.
inline double blowdown_value(const ProfileGrid& profile, double x_norm, double rho) {
  if (!(x_norm > 0.0) || !(rho > 0.0)) {
    throw std::invalid_argument("blowdown_value: x_norm and rho must be positive");
  }
  return detail::rescaled(profile, x_norm, rho);
}

struct BlowdownRate {
  std::vector<double> rho_samples;
  /// |r(rho)/rho - 1| per sample. By radial symmetry and convexity this is
  /// also sup over the closed unit ball of |u_rho(x) - |x||.
  std::vector<double> deviations;
  /// n / rho per sample.
  std::vector<double> bounds;
  bool within_bound = true;
  bool monotone = true;

  bool pass() const { return within_bound && monotone; }
};

/// Compares each deviation with n/rho and checks that deviations do not
/// increase along the (strictly increasing) samples, up to `tol`.
inline BlowdownRate check_blowdown_rate(const ProfileGrid& profile, std::span<const double> rho_samples,
                                        double tol = 1e-12) {
  if (rho_samples.empty()) {
    throw std::invalid_argument("check_blowdown_rate: no samples");
  }
  for (std::size_t i = 0; i < rho_samples.size(); ++i) {
    if (!(rho_samples[i] > 0.0)) {
      throw std::invalid_argument("check_blowdown_rate: samples must be positive");
    }
    if (i > 0 && !(rho_samples[i] > rho_samples[i - 1])) {
      throw std::invalid_argument("check_blowdown_rate: samples must be strictly increasing");
    }
  }
  const double n = profile.dimension().as_double();
  BlowdownRate out;
  for (double rho : rho_samples) {
    // 1 - r/rho computed as (rho - r)/rho; r <= rho keeps this >= 0.
    const double dev = std::abs(rho - profile.value_at(rho)) / rho;
    if (!out.deviations.empty() && dev > out.deviations.back() + tol) {
      out.monotone = false;
    }
    out.rho_samples.push_back(rho);
    out.deviations.push_back(dev);
    out.bounds.push_back(n / rho);
    if (!(dev <= n / rho + tol)) {
      out.within_bound = false;
    }
  }
  return out;
}

/// |x - y| - |u_rho(x) - u_rho(y)|; nonnegative for a 1-Lipschitz u_rho.
inline double lipschitz_slack(const ProfileGrid& profile, double rho, const SectionPoint& x, const SectionPoint& y) {
  const double ux = detail::rescaled(profile, detail::norm(x), rho);
  const double uy = detail::rescaled(profile, detail::norm(y), rho);
  return detail::distance(x, y) - std::abs(ux - uy);
}

/// || u_rho(x) - u_rho(y) | - delta | for y = x + delta x/|x| (x = 0 uses the
/// first axis). Zero for the cone |x|.
inline double null_defect(const ProfileGrid& profile, double rho, double delta, const SectionPoint& x) {
  const double a = detail::norm(x);
  const double ux = detail::rescaled(profile, a, rho);
  const double uy = detail::rescaled(profile, a + delta, rho);
  return std::abs(std::abs(uy - ux) - delta);
}

struct LipschitzNull {
  std::size_t pairs = 0;
  /// Smallest Lipschitz slack over the sampled pairs.
  double lipschitz_worst = 0.0;
  /// Largest null defect over the sampled base points.
  double null_worst = 0.0;
  /// 2 n / rho.
  double null_bound = 0.0;
  bool lipschitz_pass = true;
  bool null_pass = true;

  bool pass() const { return lipschitz_pass && null_pass; }
};

/// Samples `pairs` pairs uniformly in the disc of radius T/rho - delta of a
/// plane section (seeded, so repeatable). The null base point is the first
/// point of each pair. Passing needs slack >= -tol and null defect
/// <= 2n/rho + tol.
inline LipschitzNull check_lipschitz_and_null(const ProfileGrid& profile, double rho, double delta,
                                              std::size_t pairs, std::uint64_t seed = 20240601,
                                              double tol = 1e-10) {
  if (!(rho > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("check_lipschitz_and_null: rho and delta must be positive");
  }
  const double reach = profile.horizon() / rho - delta;
  if (!(reach > 0.0)) {
    throw OutOfRange("check_lipschitz_and_null: rho (1 + delta) exceeds the horizon");
  }
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::acos(-1.0);
  auto draw = [&]() {
    const double radius = reach * std::sqrt(unit(gen));
    const double angle = two_pi * unit(gen);
    return SectionPoint{radius * std::cos(angle), radius * std::sin(angle)};
  };

  LipschitzNull out;
  out.pairs = pairs;
  out.lipschitz_worst = std::numeric_limits<double>::infinity();
  out.null_bound = 2.0 * profile.dimension().as_double() / rho;
  for (std::size_t k = 0; k < pairs; ++k) {
    const SectionPoint x = draw();
    const SectionPoint y = draw();
    out.lipschitz_worst = std::min(out.lipschitz_worst, lipschitz_slack(profile, rho, x, y));
    out.null_worst = std::max(out.null_worst, null_defect(profile, rho, delta, x));
  }
  if (pairs == 0) {
    out.lipschitz_worst = 0.0;
  }
  out.lipschitz_pass = out.lipschitz_worst >= -tol;
  out.null_pass = out.null_worst <= out.null_bound + tol;
  return out;
}

struct GradientImage {
  double horizon = 0.0;
  /// 1 - r'(T)
  double deficit = 0.0;
  /// 1 - T / sqrt(n^2 + T^2)
  double bound = 0.0;
  bool pass = true;
};

/// Slope deficit at the horizon against the lower slope bound. Requires
/// T >= 10 n so the bound is informative.
inline GradientImage gradient_image_check(const ProfileGrid& profile, double tol = 1e-12) {
  const double n = profile.dimension().as_double();
  const double t = profile.horizon();
  if (t < 10.0 * n) {
    throw std::invalid_argument("gradient_image_check: horizon must be at least 10 n");
  }
  const double root = std::sqrt(n * n + t * t);
  GradientImage out;
  out.horizon = t;
  out.deficit = profile.back().slope_deficit();
  out.bound = n * n / (root * (root + t));
  out.pass = out.deficit >= -tol && out.deficit <= out.bound + tol;
  return out;
}

struct BlowdownReport {
  int n = 1;
  BlowdownRate rate;
  double lipschitz_rho = 0.0;
  double delta = 1.0;
  LipschitzNull lipschitz;
  GradientImage gradient;
  bool gradient_checked = false;

  bool pass() const { return rate.pass() && lipschitz.pass() && (!gradient_checked || gradient.pass); }
};

/// Rate check at every sample, Lipschitz/null check at the largest sample
/// that leaves room for delta (falling back to the largest admissible rho),
/// and the gradient check when the horizon allows it.
inline BlowdownReport blowdown_report(const ProfileGrid& profile, std::span<const double> rho_samples,
                                      double delta = 1.0, std::size_t pairs = 1000,
                                      std::uint64_t seed = 20240601) {
  BlowdownReport out;
  out.n = profile.dimension().value();
  out.rate = check_blowdown_rate(profile, rho_samples);
  out.delta = delta;
  double rho = rho_samples.back();
  if (rho * (1.0 + delta) > profile.horizon()) {
    rho = profile.horizon() / (1.0 + delta);
  }
  out.lipschitz_rho = rho;
  out.lipschitz = check_lipschitz_and_null(profile, rho, delta, pairs, seed);
  if (profile.horizon() >= 10.0 * profile.dimension().as_double()) {
    out.gradient = gradient_image_check(profile);
    out.gradient_checked = true;
  }
  return out;
}

}  // namespace soliton

#pragma once

// Hessian spectrum of u(x) = r(|x|): eigenvalue r''(t) in the radial
// direction and r'(t)/t with multiplicity n - 1 in the tangential ones.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "soliton/errors.hpp"
#include "soliton/profile.hpp"

namespace soliton {

struct HessianSpectrum {
  double t = 0.0;
  double lambda_radial = 0.0;
  double lambda_tangential = 0.0;
  double min_eig = 0.0;
};

namespace detail {

inline HessianSpectrum make_spectrum(Dimension n, double t, double radial, double tangential) {
  const double lowest = n.value() == 1 ? radial : std::min(radial, tangential);
  return {t, radial, tangential, lowest};
}

/// r'(t)/t from the even series, valid where the launch series is used.
inline double tangential_series(Dimension n, double t) {
  const double nd = n.as_double();
  const double n3 = nd * nd * nd;
  const double t2 = t * t;
  return 1.0 / nd - t2 / (n3 * (nd + 2.0)) + (3.0 - nd) * t2 * t2 / (n3 * nd * nd * (nd + 2.0) * (nd + 4.0));
}

inline void require_singular_profile(const ProfileGrid& profile, const char* who) {
  if (profile.epsilon() != 0.0) {
    throw std::invalid_argument(std::string(who) + ": needs an eps = 0 profile");
  }
}

}  // namespace detail

/// Spectrum at radius t. Below the launch radius both eigenvalues come from
/// the series, which avoids 0/0 in r'/t.
inline HessianSpectrum hessian_eigs(const ProfileGrid& profile, double t) {
  detail::require_singular_profile(profile, "hessian_eigs");
  if (!(t >= 0.0 && t <= profile.horizon())) {
    throw OutOfRange("hessian_eigs: t=" + std::to_string(t) + " outside [0, " +
                     std::to_string(profile.horizon()) + "]");
  }
  const Dimension n = profile.dimension();
  if (t < profile.config().effective_launch_radius()) {
    return detail::make_spectrum(n, t, taylor_launch(n, t).d2r, detail::tangential_series(n, t));
  }
  const double theta = profile.rapidity_at(t);
  return detail::make_spectrum(n, t, curvature_from_rapidity(t, theta, n, 0.0), std::tanh(theta) / t);
}

/// Spectrum at grid node i, using the stored r'' (so a corrupted node is
/// seen as such) and the series for r'/t inside the launch region.
inline HessianSpectrum node_spectrum(const ProfileGrid& profile, std::size_t i) {
  if (i >= profile.size()) {
    throw OutOfRange("node_spectrum: index " + std::to_string(i) + " outside the grid");
  }
  const auto& p = profile[i];
  const Dimension n = profile.dimension();
  const double tangential =
      p.t < profile.config().effective_launch_radius() ? detail::tangential_series(n, p.t) : p.dr / p.t;
  return detail::make_spectrum(n, p.t, p.d2r, tangential);
}

struct ConvexityReport {
  int n = 1;
  std::size_t nodes = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  double min_eig_t = 0.0;
  /// Both eigenvalues at the first node (t = 0).
  double origin_radial = 0.0;
  double origin_tangential = 0.0;
  /// Nodes with min_eig <= 0 (or NaN).
  std::vector<std::size_t> failures;

  bool pass() const { return failures.empty(); }
};

/// min_eig > 0 at every node. Since both eigenvalues are 1/n at the origin,
/// any nonpositive value elsewhere is a hard failure.
inline ConvexityReport check_strict_convexity(const ProfileGrid& profile) {
  detail::require_singular_profile(profile, "check_strict_convexity");
  ConvexityReport out;
  out.n = profile.dimension().value();
  out.nodes = profile.size();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const HessianSpectrum s = node_spectrum(profile, i);
    if (i == 0) {
      out.origin_radial = s.lambda_radial;
      out.origin_tangential = s.lambda_tangential;
    }
    if (!(s.min_eig > 0.0)) {
      out.failures.push_back(i);
    }
    if (std::isnan(s.min_eig) || s.min_eig < out.min_eig) {
      out.min_eig = s.min_eig;
      out.min_eig_t = s.t;
    }
  }
  return out;
}

/// Copy of `profile` with r'' forced to 0 at node `index`, for exercising
/// the failure paths of the checks.
inline ProfileGrid inject_curvature_fault(const ProfileGrid& profile, std::size_t index) {
  if (index >= profile.size()) {
    throw OutOfRange("inject_curvature_fault: index " + std::to_string(index) + " outside the grid of " +
                     std::to_string(profile.size()) + " nodes");
  }
  std::vector<ProfileNode> nodes(profile.nodes().begin(), profile.nodes().end());
  nodes[index].d2r = 0.0;
  return ProfileGrid(profile.dimension(), profile.config(), std::move(nodes));
}

}  // namespace soliton

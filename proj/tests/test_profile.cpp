#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "soliton/bounds.hpp"
#include "soliton/profile.hpp"

using namespace soliton;

namespace {

double ln_cosh(double t) { return std::log(std::cosh(t)); }

SolverConfig config(double horizon, double step = 1e-3, double eps = 0.0) {
  SolverConfig c;
  c.horizon = horizon;
  c.step = step;
  c.epsilon = eps;
  return c;
}

}  // namespace

TEST(Dimension, RejectsNonPositive) {
  EXPECT_THROW(Dimension(0), std::invalid_argument);
  EXPECT_THROW(Dimension(-3), std::invalid_argument);
  EXPECT_EQ(Dimension(4).value(), 4);
  EXPECT_EQ(Dimension(4).as_double(), 4.0);
}

TEST(SolverConfig, ValidatesOrdering) {
  EXPECT_NO_THROW(config(10.0).validate());
  EXPECT_THROW(config(10.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(config(10.0, -1e-3).validate(), std::invalid_argument);
  EXPECT_THROW(config(1e-3, 1e-4).validate(), std::invalid_argument);  // t0 = 1e-3 is not < T
  EXPECT_THROW(config(10.0, 1e-3, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(config(10.0, 1e-3, -0.1).validate(), std::invalid_argument);
  SolverConfig c = config(10.0, 1e-2);
  c.launch_radius = 5e-3;  // below the step
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(config(10.0, 1e-2).effective_launch_radius(), 0.1);
  EXPECT_DOUBLE_EQ(config(10.0, 1e-5).effective_launch_radius(), 1e-3);
}

TEST(Rhs, InitialCurvatureOfRegularizedProblem) {
  for (int n = 1; n <= 8; ++n) {
    for (double eps : {0.1, 0.5, 1e-3}) {
      const double nd = n;
      EXPECT_NEAR(rhs(0.0, eps / nd, Dimension(n), eps), (nd * nd - eps * eps) / (nd * nd * nd), 1e-15);
    }
  }
}

TEST(Rhs, ReducesForOneDimension) {
  for (double s : {0.0, 0.3, -0.7, 0.999}) {
    EXPECT_NEAR(rhs(2.5, s, Dimension(1), 0.0), 1.0 - s * s, 1e-15);
  }
}

TEST(Rhs, DirectArithmetic) { EXPECT_DOUBLE_EQ(rhs(1.0, 0.5, Dimension(2), 0.0), 0.375); }

TEST(Rhs, DomainErrors) {
  EXPECT_THROW(rhs(1.0, 1.0, Dimension(2), 0.0), std::domain_error);
  EXPECT_THROW(rhs(1.0, -1.5, Dimension(2), 0.0), std::domain_error);
  EXPECT_THROW(rhs(0.0, 0.1, Dimension(2), 0.0), std::domain_error);
  EXPECT_NO_THROW(rhs(0.0, 0.1, Dimension(1), 0.0));
}

TEST(Taylor, OriginValues) {
  for (int n = 1; n <= 8; ++n) {
    const auto v = taylor_launch(Dimension(n), 0.0);
    EXPECT_EQ(v.r, 0.0);
    EXPECT_EQ(v.dr, 0.0);
    EXPECT_DOUBLE_EQ(v.d2r, 1.0 / n);
  }
}

TEST(Taylor, MatchesLnCoshForOneDimension) {
  const auto v = taylor_launch(Dimension(1), 0.1);
  EXPECT_NEAR(v.r, 0.0049917, 1e-7);
  // ln cosh t = t^2/2 - t^4/12 + t^6/45 - 17 t^8/2520 + ...
  EXPECT_NEAR(v.r, ln_cosh(0.1), 1e-10);
  EXPECT_NEAR(v.dr, std::tanh(0.1), 1e-8);
  EXPECT_NEAR(v.d2r, 1.0 / (std::cosh(0.1) * std::cosh(0.1)), 1e-6);
}

TEST(Taylor, ResidualIsSixthOrder) {
  // Substituting the truncated series into the equation leaves O(t^6).
  for (int n = 1; n <= 8; ++n) {
    auto residual = [n](double t) {
      const auto v = taylor_launch(Dimension(n), t);
      return std::abs(v.d2r / (1.0 - v.dr * v.dr) + (n - 1.0) * v.dr / t - 1.0);
    };
    const double ratio = residual(0.2) / residual(0.1);
    EXPECT_NEAR(ratio, 64.0, 4.0) << "n=" << n;
  }
}

TEST(ClosedForm, ValuesAtOne) {
  const auto v = closed_form_n1(1.0);
  EXPECT_NEAR(v.r, 0.4337808, 1e-7);
  EXPECT_NEAR(v.dr, 0.7615942, 1e-7);
  EXPECT_NEAR(v.d2r, 0.4199743, 1e-7);
  EXPECT_LT(std::abs(v.d2r - (1.0 - v.dr * v.dr)), 1e-12);
  const auto z = closed_form_n1(0.0);
  EXPECT_EQ(z.r, 0.0);
  EXPECT_EQ(z.dr, 0.0);
  EXPECT_EQ(z.d2r, 1.0);
}

TEST(ClosedForm, StableForLargeArguments) {
  const auto v = closed_form_n1(800.0);
  EXPECT_TRUE(std::isfinite(v.r));
  EXPECT_NEAR(v.r, 800.0 - std::log(2.0), 1e-12);
  EXPECT_EQ(v.dr, 1.0);
  EXPECT_THROW(closed_form_n1(-1.0), std::domain_error);
}

TEST(IntegrateProfile, OneDimensionalOracle) {
  const auto g = integrate_profile(Dimension(1), config(20.0));
  double err_r = 0.0;
  double err_dr = 0.0;
  for (const auto& p : g.nodes()) {
    err_r = std::max(err_r, std::abs(p.r - ln_cosh(p.t)));
    err_dr = std::max(err_dr, std::abs(p.dr - std::tanh(p.t)));
  }
  EXPECT_LE(err_r, 1e-8);
  EXPECT_LE(err_dr, 1e-8);
  EXPECT_DOUBLE_EQ(g.horizon(), 20.0);
  EXPECT_EQ(g.size(), 20001u);
}

TEST(IntegrateProfile, SandwichAtTen) {
  const auto g = integrate_profile(Dimension(2), config(10.0));
  EXPECT_GE(g.back().r, std::sqrt(104.0) - 2.0);
  EXPECT_LE(g.back().r, 10.0);
}

TEST(IntegrateProfile, OriginNode) {
  for (int n = 1; n <= 8; ++n) {
    const auto g = integrate_profile(Dimension(n), config(2.0));
    EXPECT_EQ(g.front().t, 0.0);
    EXPECT_EQ(g.front().r, 0.0);
    EXPECT_EQ(g.front().dr, 0.0);
    EXPECT_DOUBLE_EQ(g.front().d2r, 1.0 / n);
  }
}

TEST(IntegrateProfile, GridInvariants) {
  for (int n = 1; n <= 8; ++n) {
    const auto g = integrate_profile(Dimension(n), config(30.0, 1e-2));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto& p = g[i];
      EXPECT_GE(p.dr, 0.0);
      EXPECT_GT(p.slope_deficit(), 0.0);
      EXPECT_GT(p.d2r, 0.0);
      EXPECT_LE(p.d2r, 1.0);
      if (i > 0) {
        EXPECT_GT(p.t, g[i - 1].t);
        EXPECT_GT(p.r, g[i - 1].r);
      }
    }
  }
}

TEST(IntegrateProfile, ShortenedLastInterval) {
  const auto g = integrate_profile(Dimension(3), config(1.0025, 1e-2));
  EXPECT_DOUBLE_EQ(g.horizon(), 1.0025);
  EXPECT_NEAR(g[g.size() - 2].t, 1.0, 1e-12);
}

TEST(IntegrateProfile, EntryPointsCheckEpsilon) {
  EXPECT_THROW(integrate_profile(Dimension(2), config(5.0, 1e-3, 0.1)), std::invalid_argument);
  EXPECT_THROW(integrate_regularized(Dimension(2), config(5.0)), std::invalid_argument);
  EXPECT_EQ(integrate(Dimension(2), config(5.0, 1e-3, 0.1)).epsilon(), 0.1);
  EXPECT_EQ(integrate(Dimension(2), config(5.0)).epsilon(), 0.0);
}

TEST(Regularized, InitialNode) {
  const auto g = integrate_regularized(Dimension(3), config(1.0, 1e-3, 0.1));
  EXPECT_EQ(g.front().t, 0.0);
  EXPECT_EQ(g.front().r, 0.0);
  EXPECT_NEAR(g.front().dr, 0.1 / 3.0, 1e-15);
  EXPECT_NEAR(g.front().d2r, (9.0 - 0.01) / 27.0, 1e-15);
}

TEST(Regularized, InitialCurvatureHalfEpsilon) {
  for (int n = 1; n <= 8; ++n) {
    const auto g = integrate_regularized(Dimension(n), config(1.0, 1e-3, 0.5));
    const double nd = n;
    EXPECT_NEAR(g.front().d2r, (nd * nd - 0.25) / (nd * nd * nd), 1e-15);
    EXPECT_GT(g.front().d2r, 0.0);
  }
}

TEST(Regularized, OneDimensionalConvergence) {
  // For n = 1 the rapidity is atanh(eps) + t, so r_eps -> ln cosh linearly.
  std::vector<double> errors;
  for (double eps : {4e-2, 2e-2, 1e-2, 5e-3}) {
    const auto g = integrate_regularized(Dimension(1), config(5.0, 1e-3, eps));
    double worst = 0.0;
    for (const auto& p : g.nodes()) {
      worst = std::max(worst, std::abs(p.r - ln_cosh(p.t)));
    }
    errors.push_back(worst);
  }
  for (std::size_t k = 1; k < errors.size(); ++k) {
    EXPECT_NEAR(errors[k] / errors[k - 1], 0.5, 0.05) << "k=" << k;
  }
}

TEST(Extrapolation, MatchesUnregularizedProfile) {
  const std::vector<double> eps{1e-2, 5e-3};
  const auto ex = extrapolate_eps(Dimension(2), config(10.0), eps);
  const auto ref = integrate_profile(Dimension(2), config(10.0));
  EXPECT_NEAR(ex.grid.value_at(10.0), ref.value_at(10.0), 1e-4);
  EXPECT_TRUE(std::isnan(ex.order));
  ASSERT_EQ(ex.successive_differences.size(), 1u);
}

TEST(Extrapolation, OneDimensionalClosedForm) {
  const std::vector<double> eps{2e-2, 1e-2, 5e-3};
  const auto ex = extrapolate_eps(Dimension(1), config(5.0), eps);
  double worst = 0.0;
  for (const auto& p : ex.grid.nodes()) {
    worst = std::max(worst, std::abs(p.r - ln_cosh(p.t)));
  }
  EXPECT_LE(worst, 1e-4);
  EXPECT_NEAR(ex.order, 1.0, 0.1);
}

TEST(Extrapolation, EmpiricalOrderNearOne) {
  const std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
  const auto ex = extrapolate_eps(Dimension(2), config(10.0), eps);
  EXPECT_NEAR(ex.order, 1.0, 0.1);
  ASSERT_EQ(ex.successive_differences.size(), 2u);
  EXPECT_GT(ex.successive_differences[0], ex.successive_differences[1]);
}

TEST(Extrapolation, RejectsBadLists) {
  const std::vector<double> one{1e-2};
  EXPECT_THROW(extrapolate_eps(Dimension(2), config(5.0), one), std::invalid_argument);
  const std::vector<double> increasing{1e-3, 1e-2};
  EXPECT_THROW(extrapolate_eps(Dimension(2), config(5.0), increasing), std::invalid_argument);
  const std::vector<double> zero{1e-2, 0.0};
  EXPECT_THROW(extrapolate_eps(Dimension(2), config(5.0), zero), std::invalid_argument);
}

TEST(ProfileGrid, EvaluationRange) {
  const auto g = integrate_profile(Dimension(2), config(5.0));
  EXPECT_THROW(g.value_at(5.0 + 1e-9), OutOfRange);
  EXPECT_THROW(g.value_at(-1e-9), OutOfRange);
  EXPECT_THROW(g.slope_at(6.0), OutOfRange);
  EXPECT_EQ(g.value_at(g[100].t), g[100].r);
  EXPECT_NEAR(g.slope_at(g[100].t), g[100].dr, 1e-15);
}

TEST(ProfileGrid, InterpolatedValuesMatchOracle) {
  const auto g = integrate_profile(Dimension(1), config(10.0, 1e-2));
  for (double t = 0.0; t <= 10.0; t += 0.0731) {
    EXPECT_NEAR(g.value_at(t), ln_cosh(t), 1e-8);
    EXPECT_NEAR(g.slope_at(t), std::tanh(t), 1e-8);
  }
}

TEST(ProfileGrid, RejectsUnorderedNodes) {
  std::vector<ProfileNode> nodes{{0.0, 0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 1.0, 0.0}};
  EXPECT_THROW(ProfileGrid(Dimension(1), config(1.0), nodes), std::invalid_argument);
  std::vector<ProfileNode> single{{0.0, 0.0, 0.0, 1.0, 0.0}};
  EXPECT_THROW(ProfileGrid(Dimension(1), config(1.0), single), std::invalid_argument);
}

TEST(ProfileGrid, IntegrationIsDeterministic) {
  const auto a = integrate_profile(Dimension(5), config(10.0));
  const auto b = integrate_profile(Dimension(5), config(10.0));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].r, b[i].r);
    EXPECT_EQ(a[i].dr, b[i].dr);
  }
}

TEST(SlopeDeficit, AccurateWhereSlopeRoundsToOne) {
  const auto g = integrate_profile(Dimension(1), config(30.0, 1e-3));
  const double t = g.back().t;
  const double exact = 2.0 / (std::exp(2.0 * t) + 1.0);
  EXPECT_EQ(g.back().dr, 1.0);
  EXPECT_NEAR(g.back().slope_deficit() / exact, 1.0, 1e-8);
}

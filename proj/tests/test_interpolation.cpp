#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "soliton/interpolation.hpp"
#include "soliton/tridiagonal.hpp"

using soliton::hermite_eval;

namespace {

struct Samples {
  std::vector<double> x, y, dy;
};

template <class F, class DF>
Samples sample(F f, DF df, double a, double b, int count) {
  Samples s;
  for (int i = 0; i <= count; ++i) {
    const double x = a + (b - a) * i / count;
    s.x.push_back(x);
    s.y.push_back(f(x));
    s.dy.push_back(df(x));
  }
  return s;
}

}  // namespace

TEST(Hermite, ReproducesNodesExactly) {
  const auto s = sample([](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }, 0.0, 1.0, 10);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    EXPECT_EQ(hermite_eval(s.x, s.y, s.dy, s.x[i]).value, s.y[i]);
  }
}

TEST(Hermite, ExactOnIncreasingCubic) {
  auto f = [](double x) { return x * x * x + x; };
  auto df = [](double x) { return 3.0 * x * x + 1.0; };
  const auto s = sample(f, df, 0.0, 2.0, 20);
  for (double at = 0.0; at <= 2.0; at += 0.0137) {
    const auto v = hermite_eval(s.x, s.y, s.dy, at);
    EXPECT_NEAR(v.value, f(at), 1e-13);
    EXPECT_NEAR(v.derivative, df(at), 1e-12);
  }
}

TEST(Hermite, FourthOrderOnSmoothData) {
  auto err = [](int count) {
    const auto s = sample([](double x) { return std::log(std::cosh(x)); }, [](double x) { return std::tanh(x); },
                          0.0, 3.0, count);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
      const double mid = 0.5 * (s.x[k] + s.x[k + 1]);
      worst = std::max(worst, std::abs(hermite_eval(s.x, s.y, s.dy, mid).value - std::log(std::cosh(mid))));
    }
    return worst;
  };
  const double ratio = err(20) / err(40);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Hermite, MonotoneDataStaysMonotone) {
  // A step with badly overshooting derivative data.
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{0.0, 0.0, 1.0, 1.0, 1.0};
  const std::vector<double> dy{0.0, 5.0, 5.0, 0.0, 0.0};
  double prev = -1.0;
  for (double at = 0.0; at <= 4.0; at += 0.01) {
    const double v = hermite_eval(x, y, dy, at).value;
    EXPECT_GE(v, prev - 1e-15);
    EXPECT_GE(v, -1e-15);
    EXPECT_LE(v, 1.0 + 1e-15);
    prev = v;
  }
}

TEST(Hermite, RejectsBadInput) {
  const std::vector<double> x{0.0, 1.0};
  const std::vector<double> y{0.0, 1.0};
  const std::vector<double> dy{1.0, 1.0};
  EXPECT_THROW(hermite_eval(x, y, dy, 1.5), std::invalid_argument);
  EXPECT_THROW(hermite_eval(x, y, dy, -0.1), std::invalid_argument);
  const std::vector<double> one{0.0};
  EXPECT_THROW(hermite_eval(one, one, one, 0.0), std::invalid_argument);
  const std::vector<double> short_dy{1.0};
  EXPECT_THROW(hermite_eval(x, y, short_dy, 0.5), std::invalid_argument);
}

TEST(Tridiagonal, SolvesKnownSystem) {
  // [2 1 0; 1 3 1; 0 1 2] x = [3 5 3] has x = (1, 1, 1).
  const std::vector<double> lower{0.0, 1.0, 1.0};
  const std::vector<double> diag{2.0, 3.0, 2.0};
  const std::vector<double> upper{1.0, 1.0, 0.0};
  const std::vector<double> rhs{3.0, 5.0, 3.0};
  const auto x = soliton::solve_tridiagonal(lower, diag, upper, rhs);
  ASSERT_EQ(x.size(), 3u);
  for (double v : x) {
    EXPECT_NEAR(v, 1.0, 1e-15);
  }
}

TEST(Tridiagonal, ZeroPivotThrows) {
  const std::vector<double> lower{0.0, 1.0};
  const std::vector<double> diag{0.0, 1.0};
  const std::vector<double> upper{1.0, 0.0};
  const std::vector<double> rhs{1.0, 1.0};
  EXPECT_THROW(soliton::solve_tridiagonal(lower, diag, upper, rhs), std::domain_error);
}

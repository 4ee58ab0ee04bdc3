#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "cdfpen/penalties.hpp"

using namespace cdfpen;

namespace {

// Table 1 derivative formulas, written out independently of the library.
double scad_derivative_table(double b, double lambda, double gamma) {
  if (b <= lambda) return lambda;
  return std::max(gamma * lambda - b, 0.0) / (gamma - 1.0);
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 1e-13, 50);
}

std::vector<PenaltyConfig> sample_configs() {
  return {PenaltyConfig::cdf(0.8, 0.7), PenaltyConfig::lasso(1.3), PenaltyConfig::scad(1.1),
          PenaltyConfig::mcp(0.9)};
}

}  // namespace

TEST(PenaltyConfig, Validation) {
  EXPECT_THROW(PenaltyConfig::cdf(-1.0, 1.0), ValidationError);
  EXPECT_THROW(PenaltyConfig::cdf(1.0, 0.0), ValidationError);
  EXPECT_THROW(PenaltyConfig::scad(1.0, 2.0), ValidationError);
  EXPECT_THROW(PenaltyConfig::mcp(1.0, 1.0), ValidationError);
  EXPECT_THROW(PenaltyConfig::lasso(std::nan("")), ValidationError);
  EXPECT_NO_THROW(PenaltyConfig::scad(1.0, 2.0001));
  const auto s = PenaltyConfig::scad(1.0);
  EXPECT_EQ(*s.gamma(), 3.7);
  EXPECT_FALSE(s.nu());
  EXPECT_EQ(*PenaltyConfig::mcp(1.0).gamma(), 3.0);
  EXPECT_FALSE(PenaltyConfig::cdf(1.0, 2.0).gamma());
  EXPECT_EQ(PenaltyConfig::cdf(1.0, 2.0).with_lambda(0.5).lambda(), 0.5);
  EXPECT_EQ(*PenaltyConfig::cdf(1.0, 2.0).with_lambda(0.5).nu(), 2.0);
}

TEST(PenaltyKind, ParseRoundTrip) {
  for (auto k : {PenaltyKind::Cdf, PenaltyKind::Lasso, PenaltyKind::Scad, PenaltyKind::Mcp}) {
    EXPECT_EQ(parse_penalty_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_penalty_kind("SCAD"), PenaltyKind::Scad);
  EXPECT_THROW(parse_penalty_kind("bridge"), ValidationError);
}

TEST(PenaltyValue, Examples) {
  EXPECT_NEAR(penalty_value(PenaltyConfig::cdf(1.0, 1.0), 0.0), std::sqrt(2.0 * std::numbers::pi) / 2,
              1e-15);
  EXPECT_DOUBLE_EQ(penalty_value(PenaltyConfig::lasso(2.0), -3.0), 6.0);
  const double quad = integrate([](double t) { return scad_derivative_table(t, 1.0, 3.7); }, 0.0, 0.5);
  EXPECT_NEAR(penalty_value(PenaltyConfig::scad(1.0, 3.7), 0.5), quad, 1e-12);
}

TEST(PenaltyValue, ScadAndMcpMatchQuadratureOfTableDerivative) {
  const double lambda = 1.2;
  for (double b : {0.3, 1.2, 2.0, 4.0, 4.44, 6.0}) {
    const double scad = integrate([&](double t) { return scad_derivative_table(t, lambda, 3.7); }, 0.0, b);
    EXPECT_NEAR(penalty_value(PenaltyConfig::scad(lambda), b), scad, 1e-10) << b;
    const double mcp = integrate(
        [&](double t) { return t <= 3.0 * lambda ? lambda - t / 3.0 : 0.0; }, 0.0, b);
    EXPECT_NEAR(penalty_value(PenaltyConfig::mcp(lambda), b), mcp, 1e-10) << b;
  }
}

TEST(PenaltyValue, SymmetricAndMonotone) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (const auto& cfg : sample_configs()) {
    for (int i = 0; i < 50; ++i) {
      const double a = u(rng);
      const double b = u(rng);
      EXPECT_EQ(penalty_value(cfg, a), penalty_value(cfg, -a));
      if (a < b) EXPECT_LE(penalty_value(cfg, a), penalty_value(cfg, b));
    }
  }
}

TEST(PenaltyValue, CdfCenteredApproachesLasso) {
  const auto cfg = PenaltyConfig::cdf(0.7, 1e3);
  const double base = penalty_value(cfg, 0.0);
  for (double b = 0.25; b <= 10.0; b += 0.25) {
    const double centered = penalty_value(cfg, b) - base;
    EXPECT_NEAR(centered, 0.7 * b, 1e-3 * 0.7 * b) << b;
  }
}

TEST(PenaltyDerivative, Examples) {
  EXPECT_EQ(penalty_derivative(PenaltyConfig::mcp(1.0, 3.0), 5.0), 0.0);
  EXPECT_NEAR(penalty_derivative(PenaltyConfig::cdf(1.0, 1.0), 1e-12), 1.0, 1e-15);
  EXPECT_EQ(penalty_derivative(PenaltyConfig::scad(1.0, 3.7), 0.5), 1.0);
  EXPECT_THROW(penalty_derivative(PenaltyConfig::lasso(1.0), 0.0), ValidationError);
  EXPECT_THROW(penalty_derivative(PenaltyConfig::lasso(1.0), -1.0), ValidationError);
}

TEST(PenaltyDerivative, FiniteDifferences) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> beta(0.1, 8.0);
  const double h = 1e-6;
  for (const auto& cfg : sample_configs()) {
    for (int i = 0; i < 100; ++i) {
      const double b = beta(rng);
      const double fd = (penalty_value(cfg, b + h) - penalty_value(cfg, b - h)) / (2 * h);
      EXPECT_NEAR(penalty_derivative(cfg, b), fd, 1e-6) << cfg.describe() << " beta=" << b;
      EXPECT_GE(penalty_derivative(cfg, b), 0.0);
    }
  }
}

TEST(PenaltyDerivative, VanishesForLargeCoefficients) {
  for (const auto& cfg : sample_configs()) {
    const double nu = cfg.nu().value_or(0.0);
    const double g = cfg.gamma().value_or(0.0);
    const double b = std::max({20.0 * nu, g * cfg.lambda() + 1.0, 50.0});
    if (cfg.kind() == PenaltyKind::Lasso) {
      EXPECT_EQ(penalty_derivative(cfg, b), cfg.lambda());
    } else {
      EXPECT_LT(penalty_derivative(cfg, b), 1e-8);
    }
  }
}

TEST(DZeroPlus, EqualsLambda) {
  const auto cdf = PenaltyConfig::cdf(0.7, 2.5);
  EXPECT_NEAR(d_zero_plus(cdf), penalty_derivative(cdf, 1e-12), 1e-12);
  EXPECT_EQ(d_zero_plus(PenaltyConfig::lasso(1.3)), 1.3);
  for (const auto& cfg : sample_configs()) {
    EXPECT_DOUBLE_EQ(d_zero_plus(cfg), cfg.lambda());
    EXPECT_EQ(d_zero_plus(cfg.with_lambda(0.0)), 0.0);
  }
}

TEST(CdfSecondDerivative, MatchesFiniteDifference) {
  const auto cfg = PenaltyConfig::cdf(1.0, 1.0);
  const double h = 1e-6;
  const double fd = (penalty_derivative(cfg, 1.0 + h) - penalty_derivative(cfg, 1.0 - h)) / (2 * h);
  EXPECT_NEAR(cdf_second_derivative(cfg, 1.0), -std::exp(-0.5), 1e-15);
  EXPECT_NEAR(cdf_second_derivative(cfg, 1.0), fd, 1e-6);
  EXPECT_NEAR(cdf_second_derivative(cfg, 60.0), 0.0, 1e-300);
  EXPECT_EQ(cdf_second_derivative(PenaltyConfig::cdf(0.0, 1.0), 0.3), 0.0);
  EXPECT_THROW(cdf_second_derivative(PenaltyConfig::lasso(1.0), 1.0), ValidationError);
}

TEST(CdfSecondDerivative, MinimumAtNu) {
  const auto cfg = PenaltyConfig::cdf(1.7, 0.6);
  double lo = 0.0;
  double arg = 0.0;
  for (int i = 1; i <= 100000; ++i) {
    const double b = 5.0 * i / 100000;
    const double v = cdf_second_derivative(cfg, b);
    if (v < lo) {
      lo = v;
      arg = b;
    }
  }
  EXPECT_NEAR(lo, -1.7 * std::exp(-0.5) / 0.6, 1e-8);
  EXPECT_NEAR(arg, 0.6, 1e-4);
}

TEST(NuMin, GridOracle) {
  auto min_curvature = [](double lambda, double floor, double nu) {
    const auto cfg = PenaltyConfig::cdf(lambda, nu);
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 200000; ++i) {
      lo = std::min(lo, floor + cdf_second_derivative(cfg, 10.0 * nu * i / 200000));
    }
    return lo;
  };
  const double a = nu_min(1.0, 1.0);
  EXPECT_NEAR(a, std::exp(-0.5), 1e-15);
  EXPECT_GE(min_curvature(1.0, 1.0, a), -1e-10);
  EXPECT_LT(min_curvature(1.0, 1.0, 0.99 * a), 0.0);
  const double b = nu_min(2.0, 0.5);
  EXPECT_NEAR(b, 4.0 * std::exp(-0.5), 1e-14);
  EXPECT_GE(min_curvature(2.0, 0.5, b), -1e-10);
  EXPECT_LT(min_curvature(2.0, 0.5, 0.99 * b), 0.0);
  EXPECT_EQ(nu_min(0.0, 1.0), kNuFloor);
  EXPECT_THROW(nu_min(1.0, 0.0), ValidationError);
}

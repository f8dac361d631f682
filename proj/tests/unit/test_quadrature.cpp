#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "wshrink/quadrature.hpp"

using namespace wshrink;

TEST(Quadrature, ExactOnLowDegreePolynomials) {
  const std::vector<double> edges{-1.0, 2.0};
  for (int deg = 0; deg <= 20; ++deg) {
    auto f = [deg](double x, std::array<double, 1>& out) { out[0] = std::pow(x, deg); };
    const auto res = quadrature::integrate<1>(f, edges);
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    EXPECT_NEAR(res.value[0], exact, 1e-12 * std::max(1.0, std::fabs(exact))) << "degree " << deg;
  }
}

TEST(Quadrature, VectorValuedAndPanelEdges) {
  const std::vector<double> edges{0.0, 0.5, 1.0, 1.0, 3.0};
  auto f = [](double x, std::array<double, 2>& out) {
    out[0] = std::exp(-x);
    out[1] = x * std::exp(-x);
  };
  const auto res = quadrature::integrate<2>(f, edges);
  EXPECT_NEAR(res.value[0], 1.0 - std::exp(-3.0), 1e-13);
  EXPECT_NEAR(res.value[1], 1.0 - 4.0 * std::exp(-3.0), 1e-13);
  EXPECT_GE(res.panels, 3);
}

TEST(Quadrature, SharpPeakNeedsRefinement) {
  const std::vector<double> edges{-1.0, 1.0};
  auto f = [](double x, std::array<double, 1>& out) { out[0] = 1e-3 / (x * x + 1e-6); };
  const auto res = quadrature::integrate<1>(f, edges);
  EXPECT_NEAR(res.value[0], 2.0 * std::atan(1000.0), 1e-8);
  EXPECT_GT(res.panels, 10);
}

TEST(Quadrature, PanelBudgetRaisesNumericError) {
  const std::vector<double> edges{0.0, 1.0};
  auto f = [](double x, std::array<double, 1>& out) { out[0] = std::sin(1.0 / (x + 1e-9)); };
  quadrature::Options opt;
  opt.max_panels = 8;
  try {
    quadrature::integrate<1>(f, edges, opt);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_GT(e.achieved_error(), 0.0);
  }
}

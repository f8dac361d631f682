#include <gtest/gtest.h>

#include <cmath>

#include "wshrink/errors.hpp"
#include "wshrink/schedule.hpp"

using namespace wshrink;

namespace {

SmoothnessSpec spec(double r, double p, double q = 2.0) {
  SmoothnessSpec s;
  s.r = r;
  s.p = p;
  s.q = q;
  return s;
}

}  // namespace

TEST(Smoothness, RpBound) {
  EXPECT_NEAR(spec(1.0, 1.0).r_p(), (1.0 + std::sqrt(5.0)) / 4.0, 1e-15);
  EXPECT_EQ(spec(1.0, 2.0).r_p(), 0.0);
  EXPECT_THROW(spec(0.7, 1.0).validate(), ValidationError);
  EXPECT_THROW(spec(0.5, 2.0).validate(), ValidationError);
  EXPECT_THROW(spec(1.0, 0.5).validate(), ValidationError);
  EXPECT_NO_THROW(spec(0.9, 1.5).validate());
  EXPECT_THROW(spec(0.9, 1.0).validate(), ValidationError);  // r > 1/p
  try {
    spec(0.7, 1.0).validate();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("r_p"), std::string::npos);
  }
}

TEST(Plan, PowerModeArithmetic) {
  const auto plan = make_plan(1024, spec(1.0, 2.0), make_model(ComboId::NN));
  EXPECT_NEAR(plan.j0, 10.0 / 3.0, 1e-15);
  EXPECT_EQ(plan.L, 3);
  EXPECT_EQ(plan.J, 10);
  EXPECT_EQ(plan.J0, 5);
  EXPECT_NEAR(plan.m_at(3), 1.5, 1e-15);
  EXPECT_NEAR(plan.nu_at(3), std::exp2(4.5), 1e-12);
  EXPECT_NEAR(plan.nu_at(3), 22.627, 1e-3);
  EXPECT_NEAR(plan.j1, plan.j0, 0.0);
}

TEST(Plan, SparseRegimeArithmetic) {
  const auto plan = make_plan(1024, spec(2.0, 1.0), make_model(ComboId::DEDE));
  EXPECT_NEAR(plan.j0, 2.0, 1e-15);
  EXPECT_NEAR(plan.j1, 8.0 / 3.0, 1e-15);
  EXPECT_EQ(plan.L, 2);
  EXPECT_NEAR(plan.m_at(2), 2.25, 1e-15);
  EXPECT_NEAR(plan.m_at(3), 2.5, 1e-15);
  EXPECT_EQ(plan.J0, 6);  // round(0.5 (10 + 8/3))
}

TEST(Plan, ContinuityAtPEqualsTwo) {
  const auto below = make_plan(4096, spec(1.5, 2.0 - 1e-12), make_model(ComboId::DEDE));
  const auto at = make_plan(4096, spec(1.5, 2.0), make_model(ComboId::DEDE));
  for (int j = at.L; j < at.J; ++j) EXPECT_NEAR(below.m_at(j), at.m_at(j), 1e-9);
}

TEST(Plan, CutoffOrderingOverGrid) {
  for (double r : {0.6, 0.9, 1.0, 1.5, 2.0, 3.0, 4.0})
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const SmoothnessSpec s = spec(r, p);
      try {
        s.validate();
      } catch (const ValidationError&) {
        continue;
      }
      for (int J = 8; J <= 16; ++J) {
        const auto plan = make_plan(std::size_t{1} << J, s, make_model(ComboId::DEDE));
        const double f0 = std::floor(plan.j0);
        EXPECT_LE(plan.L, f0) << "r=" << r << " p=" << p << " J=" << J;
        if (p < 2.0) {
          EXPECT_LE(f0, std::floor(plan.j1));
          EXPECT_LE(std::floor(plan.j1), plan.J0) << "r=" << r << " p=" << p << " J=" << J;
        } else {
          EXPECT_LE(f0, plan.J0);
        }
        EXPECT_LE(plan.J0, plan.J - 1);
        ASSERT_EQ(plan.nu.size(), static_cast<std::size_t>(plan.J - plan.L));
        if (p >= 2.0)
          for (std::size_t i = 1; i < plan.nu.size(); ++i) EXPECT_GT(plan.nu[i], plan.nu[i - 1]);
      }
    }
}

// The literal m2 of the sparse regime is smaller than m1, so nu drops
// right after floor(j0) once floor(j0) (m1 - m2) > m2.
TEST(Plan, SparseRegimeNuIsNotMonotone) {
  const auto plan = make_plan(1024, spec(1.2, 1.0), make_model(ComboId::DEDE));
  EXPECT_EQ(static_cast<int>(std::floor(plan.j0)), 2);
  const int j = static_cast<int>(std::floor(plan.j0));
  ASSERT_LT(j + 1, plan.j1);
  EXPECT_LT(plan.nu_at(j + 1), plan.nu_at(j));
}

TEST(Plan, PowerModeAnchorNearJ0) {
  for (double r : {0.75, 1.0, 1.5, 2.0, 3.0})
    for (int J = 8; J <= 16; ++J) {
      const auto plan = make_plan(std::size_t{1} << J, spec(r, 2.0), make_model(ComboId::NN));
      const int j = static_cast<int>(std::lround(plan.j0));
      if (j < plan.L || j >= plan.J) continue;
      EXPECT_LE(std::fabs(std::log2(plan.beta_at(j))), 1.0) << "r=" << r << " J=" << J;
    }
}

TEST(Plan, AlphaDefaultsSatisfyStrictBound) {
  for (ComboId id : grid_combos()) {
    const auto m = make_model(id);
    for (double r : {0.75, 1.0, 2.0}) {
      const double delta = m.error.tail_meta().delta;
      EXPECT_LE(default_alpha_low(spec(r, 2.0), m.error), (2.0 + delta) / (2.0 * r + 1.0) - 1.0 - 0.01 + 1e-15);
      EXPECT_LE(default_alpha_low(spec(r, 2.0), m.error), 0.0);
    }
  }
  EXPECT_NEAR(make_model(ComboId::TT).error.tail_meta().delta, 3.99, 1e-12);
  EXPECT_NEAR(default_alpha_mid(spec(1.0, 2.0)), -2.0 / 3.0, 1e-15);
  EXPECT_EQ(default_alpha_mid(spec(1.0, 1.5)), 0.0);
}

TEST(Plan, OverridesAndValidation) {
  PlanOverrides ov;
  ov.c1 = 2.0;
  ov.coarse_level = 1;
  ov.alpha_low = 0.5;
  ov.alpha_mid = -1.0;
  const auto plan = make_plan(512, spec(1.0, 2.0), make_model(ComboId::NN), ov);
  EXPECT_EQ(plan.L, 1);
  EXPECT_NEAR(plan.nu_at(1), 2.0 * std::exp2(1.5), 1e-12);
  EXPECT_NEAR(plan.beta_at(1), std::pow(std::sqrt(512.0) / plan.nu_at(1), 0.5), 1e-12);
  EXPECT_NEAR(plan.beta_at(5), plan.nu_at(5) / std::sqrt(512.0), 1e-12);
  ov.coarse_level = 8;
  EXPECT_THROW(make_plan(512, spec(1.0, 2.0), make_model(ComboId::NN), ov), ValidationError);
  EXPECT_THROW(make_plan(1000, spec(1.0, 2.0), make_model(ComboId::NN)), InputError);
}

TEST(Plan, FlagsTailRatioCombos) {
  for (ComboId id : {ComboId::DEN, ComboId::TN, ComboId::TDE}) {
    const auto plan = make_plan(1024, spec(1.0, 2.0), make_model(id));
    EXPECT_TRUE(plan.needs_beta_bound_low);
    EXPECT_FALSE(plan.warnings.empty());
  }
  EXPECT_FALSE(make_plan(1024, spec(1.0, 2.0), make_model(ComboId::DEDE)).needs_beta_bound_low);
}

TEST(Plan, MixtureConstraints) {
  ModelParams p;
  p.mixture_weight = 0.4;
  EXPECT_NO_THROW(make_plan(1024, spec(1.0, 2.0), make_model(ComboId::NzT, p)));
  p.mixture_weight = 0.8;
  EXPECT_THROW(make_plan(1024, spec(1.0, 2.0), make_model(ComboId::NzT, p)), ValidationError);
  // p < 2: alpha_mid = 0 keeps beta = 1 >= beta0 above J0.
  EXPECT_NO_THROW(make_plan(1024, spec(2.0, 1.5), make_model(ComboId::NzDE)));
  PlanOverrides ov;
  ov.alpha_mid = 1.0;  // beta < 1 shrinking towards 0 above j0
  EXPECT_THROW(make_plan(4096, spec(1.0, 2.0), make_model(ComboId::NzN), ov), ValidationError);
}

TEST(Plan, GeometricOdds) {
  const auto plan = geometric_odds_plan(1024, spec(1.0, 2.0), make_model(ComboId::NN), 1.0);
  EXPECT_EQ(plan.beta_at(5), 32.0);
  const auto half = geometric_odds_plan(4096, spec(1.0, 2.0), make_model(ComboId::NN), 0.5);
  EXPECT_NEAR(half.j0, 4.0, 1e-15);
  EXPECT_NEAR(half.beta_at(4), std::exp2(6.0 / 3.0), 1e-12);
  EXPECT_THROW(geometric_odds_plan(1024, spec(1.0, 2.0), make_model(ComboId::NN), 0.0), ConfigError);
}

TEST(Plan, TailSuppression) {
  const auto normal = tail_suppressed_plan(make_plan(1024, spec(1.0, 2.0), make_model(ComboId::NN)), 1.0);
  EXPECT_GT(normal.beta_at(normal.J0), 1e50);
  const auto base = make_plan(1024, spec(1.0, 2.0), make_model(ComboId::TT));
  const auto t = tail_suppressed_plan(base, 1.0);
  const double b = t.beta_at(t.J0);
  EXPECT_TRUE(std::isfinite(b));
  // eta = t5 with unit std; x = 2 n^(1/3).
  const double x = 2.0 * std::cbrt(1024.0);
  EXPECT_NEAR(b, 1.0 / (t.error_model.pdf(x) * std::exp2(t.J0 / 3.0)), 1e-9 * b);
  EXPECT_GT(b, 10.0);
  EXPECT_LT(b, 1e8);
  for (int j = t.L; j < t.J0; ++j) EXPECT_EQ(t.beta_at(j), base.beta_at(j));
  const auto tiny = tail_suppressed_plan(base, 1e-9);
  EXPECT_NEAR(tiny.beta_at(tiny.J0), 1.0 / (tiny.error_model.pdf(0.0) * std::exp2(tiny.J0 / 3.0)), 1e-6);
}

TEST(Plan, SerializeRoundTrip) {
  const auto plan = tail_suppressed_plan(make_plan(2048, spec(1.5, 2.0), make_model(ComboId::NT)), 0.5);
  const auto back = parse_plan(serialize_plan(plan));
  EXPECT_EQ(serialize_plan(back), serialize_plan(plan));
  EXPECT_EQ(back.nu, plan.nu);
  EXPECT_EQ(back.beta, plan.beta);
  EXPECT_EQ(back.odds_mode, OddsMode::tail_suppressed);
  EXPECT_THROW(parse_plan("n=16\n"), InputError);
}

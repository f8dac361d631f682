#include <gtest/gtest.h>

#include <cmath>

#include "wshrink/errors.hpp"
#include "wshrink/model.hpp"

using namespace wshrink;

TEST(Combo, RoundTripNames) {
  for (ComboId id : all_combos()) EXPECT_EQ(parse_combo(to_string(id)), id);
  EXPECT_EQ(parse_combo("de-t"), ComboId::DET);
  EXPECT_EQ(parse_combo("C5"), ComboId::TC);
  EXPECT_EQ(all_combos().size(), 13u);
  EXPECT_EQ(grid_combos().size(), 9u);
}

TEST(Combo, UnknownIdListsEveryValidId) {
  try {
    parse_combo("XYZ");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (ComboId id : all_combos()) EXPECT_NE(msg.find(to_string(id)), std::string::npos);
  }
}

TEST(Combo, FirstLetterIsErrorSecondIsPrior) {
  const auto m = make_model(ComboId::DEN);
  EXPECT_EQ(m.error.family(), DensityFamily::double_exponential);
  EXPECT_EQ(m.prior.family(), DensityFamily::normal);
  const auto c = make_model(ComboId::TC);
  EXPECT_EQ(c.error.family(), DensityFamily::student_t);
  EXPECT_EQ(c.prior.family(), DensityFamily::cauchy);
}

TEST(Model, ErrorDensityHasRequestedStd) {
  ModelParams p;
  p.sigma = 0.7;
  for (ComboId id : grid_combos()) EXPECT_NEAR(make_model(id, p).error.second_moment(), 0.49, 1e-14);
}

TEST(Model, MixtureSwitchesAtTailLevel) {
  ModelParams p;
  p.mixture_weight = 0.2;
  auto m = make_model(ComboId::NzDE, p);
  ASSERT_TRUE(m.is_mixture());
  m.tail_from_level = 5;
  EXPECT_EQ(m.error_at(4).family(), DensityFamily::normal);
  EXPECT_EQ(m.error_at(5).family(), DensityFamily::normal_heavy_mixture);
  EXPECT_DOUBLE_EQ(m.error_at(9).mixture_weight(), 0.2);
}

TEST(Model, WithSigmaRescalesEveryDensity) {
  auto m = make_model(ComboId::NzT).with_sigma(3.0);
  EXPECT_NEAR(m.error.second_moment(), 9.0, 1e-12);
  EXPECT_NEAR(m.tail_error->component().second_moment(), 9.0, 1e-12);
  EXPECT_NEAR(make_model(ComboId::TT).with_sigma(2.0).error.second_moment(), 4.0, 1e-12);
  EXPECT_THROW(make_model(ComboId::NN).with_sigma(0.0), DomainError);
}

TEST(RateMeta, TableOneExponents) {
  const double r = 1.0;
  EXPECT_NEAR(expected_rate_meta(ComboId::NN, r, 2.0).expected_slope(r, 2.0), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(expected_rate_meta(ComboId::DEDE, r, 2.0).expected_slope(r, 2.0), -2.0 / 3.0, 1e-15);
  // DE-N and T-N: n^(-2r/(2r+2)).
  EXPECT_NEAR(expected_rate_meta(ComboId::DEN, r, 2.0).expected_slope(r, 2.0), -0.5, 1e-15);
  EXPECT_NEAR(expected_rate_meta(ComboId::TN, 2.0, 2.0).expected_slope(2.0, 2.0), -4.0 / 6.0, 1e-15);
  EXPECT_NEAR(expected_rate_meta(ComboId::NDE, r, 2.0).log_power_p_ge_2, 1.0 / 3.0, 1e-15);
  // varsigma = 4r + p(2r+1) = 7 for r = 1, p = 1.
  EXPECT_NEAR(expected_rate_meta(ComboId::DEDE, r, 1.0).log_power_p_lt_2, 8.0 / 7.0, 1e-15);
  EXPECT_NEAR(expected_rate_meta(ComboId::NT, r, 1.0).log_power_p_lt_2, 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(expected_rate_meta(ComboId::TT, r, 1.0, 5.0).extra_power_p_lt_2, 4.0 / (3.0 * 6.0), 1e-15);
  EXPECT_TRUE(std::isnan(expected_rate_meta(ComboId::TDE, r, 1.0).extra_power_p_lt_2));
}

TEST(RateMeta, ConditionMarks) {
  for (ComboId id : {ComboId::DEN, ComboId::TN, ComboId::TDE})
    EXPECT_TRUE(expected_rate_meta(id, 1.0, 2.0).needs_beta_bound_low) << to_string(id);
  for (ComboId id : {ComboId::NN, ComboId::DEDE, ComboId::DET, ComboId::TT, ComboId::NDE})
    EXPECT_FALSE(expected_rate_meta(id, 1.0, 2.0).needs_beta_bound_low) << to_string(id);
  EXPECT_TRUE(expected_rate_meta(ComboId::NDE, 1.0, 2.0).needs_tail_condition);
  EXPECT_TRUE(expected_rate_meta(ComboId::NT, 1.0, 2.0).needs_tail_condition);
  EXPECT_FALSE(expected_rate_meta(ComboId::NzT, 1.0, 2.0).needs_tail_condition);
}

// (A3) on the shipped pairs (sigma = 1, prior scale 1, t df 5).
TEST(RateMeta, RegularityCheckerAgreesWithMarks) {
  for (ComboId id : {ComboId::NN, ComboId::DEDE, ComboId::DET, ComboId::TT, ComboId::TC}) {
    const auto m = make_model(id);
    EXPECT_TRUE(check_regularity(m.prior, m.error).a3_pass) << to_string(id);
  }
  for (ComboId id : {ComboId::DEN, ComboId::TN, ComboId::TDE}) {
    const auto m = make_model(id);
    EXPECT_FALSE(check_regularity(m.prior, m.error).a3_pass) << to_string(id);
  }
}

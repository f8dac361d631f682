#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "wshrink/errors.hpp"
#include "wshrink/estimator.hpp"
#include "wshrink/signals.hpp"

using namespace wshrink;

TEST(Signals, HandEvaluatedPoints) {
  EXPECT_NEAR(heavisine(0.5), -2.0, 1e-12);
  EXPECT_NEAR(heavisine(0.25), 0.0, 1e-12);  // sin(pi) = 0, -sgn(-0.05) - sgn(0.47)
  EXPECT_NEAR(doppler(0.5), std::sqrt(0.25) * std::sin(2.1 * std::numbers::pi / 0.55), 1e-12);
  EXPECT_NEAR(blocks(0.05), 0.0, 1e-12);
  EXPECT_NEAR(blocks(0.12), 4.0, 1e-12);
  EXPECT_GT(bumps(0.1), 3.9);
  EXPECT_GT(bumps(0.5), 0.0);
}

TEST(Signals, RescaledToUnitStd) {
  for (SignalName name : {SignalName::blocks, SignalName::bumps, SignalName::doppler, SignalName::heavisine}) {
    const Signal x = test_signal(name, 1024);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(std::sqrt(ss / (x.size() - 1)), 1.0, 1e-12) << to_string(name);
  }
  SignalParams raw;
  raw.rescale = false;
  EXPECT_NEAR(test_signal(SignalName::heavisine, 2, raw)[0], heavisine(0.5), 1e-12);
}

TEST(Signals, SpikeHasOneCoefficient) {
  SignalParams p;
  p.spike_level = 3;
  p.amplitude = 1.0;
  p.r = 1.0;
  const Signal x = test_signal(SignalName::spike, 512, p);
  const auto c = dwt(x, 0, default_filter_bank());
  int nonzero = 0;
  for (int j = 0; j < c.fine_level; ++j)
    for (std::size_t k = 0; k < c.level(j).size(); ++k)
      if (std::fabs(c.level(j)[k]) > 1e-10) {
        ++nonzero;
        EXPECT_EQ(j, 3);
        EXPECT_EQ(k, 0u);
        EXPECT_NEAR(c.level(j)[k] / std::sqrt(512.0), 0.125, 1e-12);
      }
  EXPECT_EQ(nonzero, 1);
  EXPECT_NEAR(c.scaling[0], 0.0, 1e-10);
}

TEST(Signals, CriticalLevelEnergiesDropByFour) {
  SignalParams p;
  p.r = 1.0;
  p.critical_c = 1.0;
  const Signal x = test_signal(SignalName::critical, 1024, p);
  const auto c = dwt(x, 0, default_filter_bank());
  for (int j = 0; j < c.fine_level; ++j) {
    double e = 0.0;
    for (double v : c.level(j)) e += v * v / 1024.0;
    EXPECT_NEAR(e, std::exp2(-2.0 * j), 1e-10 * std::exp2(-2.0 * j)) << j;
  }
}

TEST(Signals, UnknownNameListsChoices) {
  EXPECT_EQ(parse_signal_name("doppler"), SignalName::doppler);
  try {
    parse_signal_name("sawtooth");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("heavisine"), std::string::npos);
  }
  SignalParams p;
  p.spike_level = 20;
  EXPECT_THROW(test_signal(SignalName::spike, 256, p), InputError);
}

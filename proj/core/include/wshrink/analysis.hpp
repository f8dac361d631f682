#pragma once

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wshrink/density.hpp"
#include "wshrink/schedule.hpp"
#include "wshrink/wavelet.hpp"

namespace wshrink {

/// (sum_j [2^(j(r+1/2-1/p)) ||theta_j||_p]^q)^(1/q) over detail levels plus
/// the l_p norm of the scaling coefficients. q = inf takes the max over
/// levels. DomainError for p < 1 or q < 1.
double besov_seq_norm(const WaveletCoefficients& coeffs, double r, double p, double q);

/// Warning text when xi lacks the max(p, q)-th absolute moment needed for
/// prior draws to lie in the Besov ball; empty otherwise.
std::optional<std::string> prior_moment_warning(const DensityModel& xi, double p, double q);

struct PriorDraw {
  WaveletCoefficients coeffs;  // theta scale
  std::vector<std::string> warnings;
};

/// theta_jk = 0 with probability beta_j/(1+beta_j), otherwise u/nu_j with
/// u ~ xi. Levels L..max_level; levels >= plan.J are never drawn (their
/// odds are infinite). Scaling coefficients are 0.
PriorDraw sample_prior_draw(const ShrinkagePlan& plan, const DensityModel& xi, int max_level, std::mt19937_64& rng);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<std::pair<double, double>> points;  // (log n, log risk)
  bool dropped_first = false;
};

/// OLS of log risk on log n. Needs >= 2 points, strictly increasing ns and
/// positive risks (InputError otherwise). With `drop_transient` and risk
/// standard errors, the smallest n is discarded when its risk is within two
/// standard errors of the next one.
RateFit fit_rate(const std::vector<double>& ns, const std::vector<double>& risks, bool drop_transient = false,
                 const std::vector<double>& risk_stderr = {});

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace wshrink

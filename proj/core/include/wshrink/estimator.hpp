#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "wshrink/model.hpp"
#include "wshrink/posterior.hpp"
#include "wshrink/schedule.hpp"
#include "wshrink/wavelet.hpp"

namespace wshrink {

/// Filter bank used when none is given: coiflet with 6 vanishing moments.
const FilterBank& default_filter_bank();

/// shrink() for one rule, read from a cubic B-spline of the damping factor
/// shrink(d)/d on u = sqrt(n)|d|/width(eta) in [0, 64]; exact evaluation
/// beyond. The factor is clamped to [0, 1].
class TabulatedShrinker {
public:
  explicit TabulatedShrinker(const ShrinkageRule& rule);
  ~TabulatedShrinker();
  TabulatedShrinker(const TabulatedShrinker&) = delete;
  TabulatedShrinker& operator=(const TabulatedShrinker&) = delete;

  double operator()(double d) const;
  const ShrinkageRule& rule() const { return rule_; }

  static constexpr double kMaxU = 64.0;
  static constexpr int kPointsPerUnit = 32;

private:
  struct Spline;
  ShrinkageRule rule_;
  double to_u_ = 1.0;
  std::unique_ptr<Spline> spline_;
};

/// Thread-safe store of tabulated rules keyed by their parameters.
class ShrinkCache {
public:
  std::shared_ptr<const TabulatedShrinker> get(const ShrinkageRule& rule);
  std::size_t size() const;

private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const TabulatedShrinker>> table_;
};

std::string rule_key(const ShrinkageRule& rule);

struct DenoiseOptions {
  const FilterBank* bank = nullptr;  // default_filter_bank() when null
  // Interpolated rules instead of per-coefficient quadrature. Closed-form
  // and beta = inf levels are always evaluated exactly.
  bool tabulate = false;
  ShrinkCache* cache = nullptr;  // reused tables when tabulating
};

/// The rule applied at level j of a plan.
ShrinkageRule level_rule(const BayesModel& model, const ShrinkagePlan& plan, int j);

/// y -> dwt -> d = Y/sqrt(n) -> theta_hat per detail coefficient at levels
/// L..J-1 -> idwt(sqrt(n) theta_hat). Scaling coefficients pass through.
/// InputError when y.size() != plan.n.
Signal denoise(const Signal& y, const BayesModel& model, const ShrinkagePlan& plan, const DenoiseOptions& options = {});

/// Same pipeline, returning the shrunk coefficients (data scale).
WaveletCoefficients denoise_coefficients(const Signal& y, const BayesModel& model, const ShrinkagePlan& plan,
                                         const DenoiseOptions& options = {});

/// Noise standard deviation of the samples: median |finest detail| / 0.6745.
/// The transform is orthonormal, so this is on the data scale; divide by
/// sqrt(n) for the coefficient scale d = Y/sqrt(n).
double estimate_sigma(const Signal& y, const FilterBank& bank = default_filter_bank());

}  // namespace wshrink

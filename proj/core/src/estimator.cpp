#include "wshrink/estimator.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "wshrink/errors.hpp"
#include "wshrink/io.hpp"

namespace wshrink {

struct TabulatedShrinker::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> f;
};

const FilterBank& default_filter_bank() { return filter_bank(WaveletFamily::coiflet, 3); }

TabulatedShrinker::TabulatedShrinker(const ShrinkageRule& rule) : rule_(rule) {
  rule_.validate();
  const double sn = std::sqrt(rule_.n);
  const double w = rule_.error.width();
  to_u_ = sn / w;
  if (std::isinf(rule_.beta) || rule_.closed_form()) return;

  const int count = static_cast<int>(kMaxU) * kPointsPerUnit + 1;
  const double h = 1.0 / kPointsPerUnit;
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // The factor at u = 0 is the limit, taken from a tiny positive u.
    const double u = i == 0 ? 1e-6 * h : i * h;
    const double d = u / to_u_;
    g[static_cast<std::size_t>(i)] = shrink(rule_, d) / d;
  }
  spline_ = std::make_unique<Spline>(
      Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(g.data(), g.size(), 0.0, h)});
}

TabulatedShrinker::~TabulatedShrinker() = default;

double TabulatedShrinker::operator()(double d) const {
  if (d == 0.0 || std::isinf(rule_.beta)) return 0.0;
  if (!spline_) return shrink(rule_, d);
  const double u = std::fabs(d) * to_u_;
  if (u >= kMaxU) return shrink(rule_, d);
  return d * std::clamp(spline_->f(u), 0.0, 1.0);
}

std::string rule_key(const ShrinkageRule& rule) {
  return rule.prior.describe() + "|" + rule.error.describe() + "|" + io::format_double(rule.nu) + "|" +
         io::format_double(rule.beta) + "|" + io::format_double(rule.n) + "|" + (rule.force_quadrature ? "q" : "c");
}

std::shared_ptr<const TabulatedShrinker> ShrinkCache::get(const ShrinkageRule& rule) {
  const std::string key = rule_key(rule);
  {
    std::lock_guard lock(mutex_);
    const auto it = table_.find(key);
    if (it != table_.end()) return it->second;
  }
  // Built outside the lock; a concurrent duplicate build is harmless.
  auto built = std::make_shared<const TabulatedShrinker>(rule);
  std::lock_guard lock(mutex_);
  return table_.emplace(key, std::move(built)).first->second;
}

std::size_t ShrinkCache::size() const {
  std::lock_guard lock(mutex_);
  return table_.size();
}

ShrinkageRule level_rule(const BayesModel& model, const ShrinkagePlan& plan, int j) {
  ShrinkageRule rule;
  rule.prior = model.prior;
  rule.error = model.error_at(j);
  rule.nu = plan.nu_at(j);
  rule.beta = plan.beta_at(j);
  rule.n = static_cast<double>(plan.n);
  return rule;
}

WaveletCoefficients denoise_coefficients(const Signal& y, const BayesModel& model, const ShrinkagePlan& plan,
                                         const DenoiseOptions& options) {
  if (y.size() != plan.n)
    throw InputError("signal length " + std::to_string(y.size()) + " does not match the plan's n = " +
                     std::to_string(plan.n));
  const FilterBank& bank = options.bank ? *options.bank : default_filter_bank();
  const BayesModel bound = bind_model(model, plan);
  WaveletCoefficients c = dwt(y, plan.L, bank);
  const double sn = std::sqrt(static_cast<double>(plan.n));

  for (int j = plan.L; j < plan.J; ++j) {
    const ShrinkageRule rule = level_rule(bound, plan, j);
    std::vector<double>& band = c.level(j);
    if (options.tabulate && !rule.closed_form() && !std::isinf(rule.beta)) {
      std::shared_ptr<const TabulatedShrinker> table =
          options.cache ? options.cache->get(rule) : std::make_shared<const TabulatedShrinker>(rule);
      for (double& v : band) v = (*table)(v / sn) * sn;
    } else {
      for (double& v : band) v = shrink(rule, v / sn) * sn;
    }
  }
  return c;
}

Signal denoise(const Signal& y, const BayesModel& model, const ShrinkagePlan& plan, const DenoiseOptions& options) {
  const FilterBank& bank = options.bank ? *options.bank : default_filter_bank();
  DenoiseOptions o = options;
  o.bank = &bank;
  return idwt(denoise_coefficients(y, model, plan, o), bank);
}

double estimate_sigma(const Signal& y, const FilterBank& bank) {
  const int J = dyadic_level(y.size());
  if (y.size() < 8) throw InputError("estimate_sigma needs at least 8 samples");
  const WaveletCoefficients c = dwt(y, J - 1, bank);
  std::vector<double> a(c.level(J - 1));
  for (double& v : a) v = std::fabs(v);
  const auto mid = a.begin() + static_cast<std::ptrdiff_t>(a.size() / 2);
  std::nth_element(a.begin(), mid, a.end());
  double med = *mid;
  if (a.size() % 2 == 0) med = 0.5 * (med + *std::max_element(a.begin(), mid));
  return med / 0.6745;
}

}  // namespace wshrink

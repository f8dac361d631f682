#include "wshrink/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wshrink/errors.hpp"

namespace wshrink {

namespace {

double lp_norm(const std::vector<double>& v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

// Kolmogorov distribution tail P(K > lambda).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

double besov_seq_norm(const WaveletCoefficients& coeffs, double r, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("Besov norm needs p >= 1 and q >= 1");
  coeffs.validate();
  std::vector<double> terms;
  for (int j = coeffs.coarse_level; j < coeffs.fine_level; ++j) {
    const double w = std::isinf(p) ? std::exp2(j * (r + 0.5)) : std::exp2(j * (r + 0.5 - 1.0 / p));
    terms.push_back(w * lp_norm(coeffs.level(j), p));
  }
  return lp_norm(terms, q) + lp_norm(coeffs.scaling, p);
}

std::optional<std::string> prior_moment_warning(const DensityModel& xi, double p, double q) {
  const double a = std::max(p, q);
  if (xi.has_absolute_moment(a)) return std::nullopt;
  return "prior " + xi.describe() + " has no finite absolute moment of order max(p, q) = " + std::to_string(a) +
         "; prior draws need not lie in the Besov ball";
}

PriorDraw sample_prior_draw(const ShrinkagePlan& plan, const DensityModel& xi, int max_level, std::mt19937_64& rng) {
  if (max_level < plan.L) throw DomainError("max_level must be >= the plan's coarse level");
  PriorDraw out;
  out.coeffs = WaveletCoefficients::zeros(plan.L, max_level + 1);
  if (auto w = prior_moment_warning(xi, plan.spec.p, plan.spec.q)) out.warnings.push_back(*w);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int j = plan.L; j <= max_level && j < plan.J; ++j) {
    const double beta = plan.beta_at(j);
    const double pi = std::isinf(beta) ? 0.0 : 1.0 / (1.0 + beta);
    const double nu = plan.nu_at(j);
    for (double& v : out.coeffs.level(j)) {
      if (unif(rng) < pi) v = xi.sample(rng) / nu;
    }
  }
  return out;
}

RateFit fit_rate(const std::vector<double>& ns, const std::vector<double>& risks, bool drop_transient,
                 const std::vector<double>& risk_stderr) {
  if (ns.size() != risks.size()) throw InputError("fit_rate: ns and risks differ in length");
  if (ns.size() < 2) throw InputError("fit_rate: need at least two points");
  if (!risk_stderr.empty() && risk_stderr.size() != ns.size())
    throw InputError("fit_rate: stderr list differs in length");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(risks[i] > 0.0) || !std::isfinite(risks[i])) throw InputError("fit_rate: risks must be positive and finite");
    if (!(ns[i] > 0.0)) throw InputError("fit_rate: sample sizes must be positive");
    if (i > 0 && !(ns[i] > ns[i - 1])) throw InputError("fit_rate: sample sizes must be strictly increasing");
  }
  RateFit fit;
  std::size_t first = 0;
  if (drop_transient && !risk_stderr.empty() && ns.size() > 2) {
    const double gap = std::fabs(risks[0] - risks[1]);
    if (gap <= 2.0 * std::hypot(risk_stderr[0], risk_stderr[1])) {
      first = 1;
      fit.dropped_first = true;
    }
  }
  for (std::size_t i = first; i < ns.size(); ++i) fit.points.emplace_back(std::log(ns[i]), std::log(risks[i]));

  const double m = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) mx += x, my += y;
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (fit.points.size() > 2) {
    double sse = 0.0;
    for (const auto& [x, y] : fit.points) {
      const double e = y - fit.intercept - fit.slope * x;
      sse += e * e;
    }
    fit.slope_stderr = std::sqrt(sse / (m - 2.0) / sxx);
  }
  return fit;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InputError("KS test needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, k = 0;
  double d = 0.0;
  while (i < a.size() && k < b.size()) {
    const double x = std::min(a[i], b[k]);
    while (i < a.size() && a[i] <= x) ++i;
    while (k < b.size() && b[k] <= x) ++k;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(k) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  KsResult res;
  res.statistic = d;
  res.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
  return res;
}

}  // namespace wshrink

#include "wshrink/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wshrink/errors.hpp"

namespace wshrink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be a positive finite number");
}

}  // namespace

std::string to_string(DensityFamily family) {
  switch (family) {
    case DensityFamily::normal: return "normal";
    case DensityFamily::double_exponential: return "double_exponential";
    case DensityFamily::student_t: return "student_t";
    case DensityFamily::cauchy: return "cauchy";
    case DensityFamily::normal_heavy_mixture: return "normal_heavy_mixture";
  }
  return "unknown";
}

DensityModel DensityModel::normal(double sigma) {
  require_positive(sigma, "normal sigma");
  DensityModel m;
  m.family_ = DensityFamily::normal;
  m.scale_ = sigma;
  m.log_norm_ = -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
  m.assign_tail_meta();
  return m;
}

DensityModel DensityModel::double_exponential(double scale) {
  require_positive(scale, "double-exponential scale");
  DensityModel m;
  m.family_ = DensityFamily::double_exponential;
  m.scale_ = scale;
  m.log_norm_ = -std::log(2.0 * scale);
  m.assign_tail_meta();
  return m;
}

DensityModel DensityModel::student_t(double df, double scale) {
  require_positive(df, "student-t degrees of freedom");
  require_positive(scale, "student-t scale");
  DensityModel m;
  m.family_ = DensityFamily::student_t;
  m.scale_ = scale;
  m.df_ = df;
  m.log_norm_ = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi) -
                std::log(scale);
  m.assign_tail_meta();
  return m;
}

DensityModel DensityModel::cauchy(double scale) {
  require_positive(scale, "cauchy scale");
  DensityModel m;
  m.family_ = DensityFamily::cauchy;
  m.scale_ = scale;
  m.log_norm_ = -std::log(std::numbers::pi * scale);
  m.assign_tail_meta();
  return m;
}

DensityModel DensityModel::normal_heavy_mixture(double sigma0, double weight, const DensityModel& component) {
  require_positive(sigma0, "mixture sigma0");
  if (!(weight >= 0.0 && weight <= 1.0)) throw ConfigError("mixture weight must lie in [0, 1]");
  if (component.family() == DensityFamily::normal || component.family() == DensityFamily::normal_heavy_mixture)
    throw ConfigError("mixture component must be a heavy-tailed family (double_exponential, student_t, cauchy)");
  DensityModel m;
  m.family_ = DensityFamily::normal_heavy_mixture;
  m.scale_ = sigma0;
  m.weight_ = weight;
  m.log_norm_ = -std::log(sigma0) - 0.5 * std::log(2.0 * std::numbers::pi);
  m.component_ = std::make_shared<const DensityModel>(component);
  m.assign_tail_meta();
  return m;
}

DensityModel DensityModel::with_std(DensityFamily family, double sigma, double df) {
  switch (family) {
    case DensityFamily::normal: return normal(sigma);
    case DensityFamily::double_exponential: return double_exponential(sigma / std::sqrt(2.0));
    case DensityFamily::student_t:
      return student_t(df, df > 2.0 ? sigma * std::sqrt((df - 2.0) / df) : sigma);
    case DensityFamily::cauchy: return cauchy(sigma);
    case DensityFamily::normal_heavy_mixture: break;
  }
  throw ConfigError("with_std does not apply to mixture densities");
}

void DensityModel::assign_tail_meta() {
  switch (family_) {
    case DensityFamily::normal: tail_ = {1.0, 10.0, 2.0, 1.0}; break;
    case DensityFamily::double_exponential: tail_ = {0.0, 10.0, 1.0, 1.0}; break;
    case DensityFamily::student_t: tail_ = {0.0, std::max(df_ - 1.0 - 0.01, 0.0), 0.0, df_ + 1.0}; break;
    case DensityFamily::cauchy: tail_ = {0.0, 0.0, 0.0, 2.0}; break;
    case DensityFamily::normal_heavy_mixture: {
      const TailMeta& c = component_->tail_meta();
      tail_ = {0.0, c.delta, c.gamma, c.descent_nu};
      break;
    }
  }
}

const DensityModel& DensityModel::component() const {
  if (!component_) throw ConfigError("density has no mixture component");
  return *component_;
}

double DensityModel::log_pdf(double x) const {
  const double z = x / scale_;
  switch (family_) {
    case DensityFamily::normal: return log_norm_ - 0.5 * z * z;
    case DensityFamily::double_exponential: return log_norm_ - std::fabs(z);
    case DensityFamily::student_t: return log_norm_ - 0.5 * (df_ + 1.0) * std::log1p(z * z / df_);
    case DensityFamily::cauchy: return log_norm_ - std::log1p(z * z);
    case DensityFamily::normal_heavy_mixture: {
      const double a = weight_ < 1.0 ? std::log1p(-weight_) + log_norm_ - 0.5 * z * z : -kInf;
      const double b = weight_ > 0.0 ? std::log(weight_) + component_->log_pdf(x) : -kInf;
      return log_sum_exp(a, b);
    }
  }
  return -kInf;
}

double DensityModel::pdf(double x) const { return std::exp(log_pdf(x)); }

double DensityModel::log_pdf_derivative(double x) const {
  switch (family_) {
    case DensityFamily::normal: return -x / (scale_ * scale_);
    case DensityFamily::double_exponential: return x == 0.0 ? 0.0 : -std::copysign(1.0, x) / scale_;
    case DensityFamily::student_t: return -(df_ + 1.0) * x / (df_ * scale_ * scale_ + x * x);
    case DensityFamily::cauchy: return -2.0 * x / (scale_ * scale_ + x * x);
    case DensityFamily::normal_heavy_mixture: {
      const double total = log_pdf(x);
      const double la = weight_ < 1.0 ? std::log1p(-weight_) + log_norm_ - 0.5 * (x / scale_) * (x / scale_) : -kInf;
      const double wa = std::exp(la - total);
      const double wb = 1.0 - wa;
      return wa * (-x / (scale_ * scale_)) + wb * component_->log_pdf_derivative(x);
    }
  }
  return 0.0;
}

double DensityModel::log_pdf_diff(double m, double h) const {
  const double zm = m / scale_, zh = h / scale_;
  switch (family_) {
    case DensityFamily::normal: return -2.0 * zm * zh;
    case DensityFamily::double_exponential: {
      // |zm - zh| - |zm + zh| without cancellation.
      const double mag = 2.0 * std::min(std::fabs(zm), std::fabs(zh));
      return (zm > 0.0) == (zh > 0.0) ? -mag : mag;
    }
    case DensityFamily::student_t: {
      const double lo = zm - zh;
      return -0.5 * (df_ + 1.0) * std::log1p(4.0 * zm * zh / (df_ + lo * lo));
    }
    case DensityFamily::cauchy: {
      const double lo = zm - zh;
      return -std::log1p(4.0 * zm * zh / (1.0 + lo * lo));
    }
    case DensityFamily::normal_heavy_mixture: {
      // Third-order Taylor remainder is below 1e-10 relative for tiny h.
      if (std::fabs(h) < 1e-5 * std::min(scale_, component_->width())) return 2.0 * h * log_pdf_derivative(m);
      return log_pdf(m + h) - log_pdf(m - h);
    }
  }
  return 0.0;
}

double DensityModel::second_moment() const {
  switch (family_) {
    case DensityFamily::normal: return scale_ * scale_;
    case DensityFamily::double_exponential: return 2.0 * scale_ * scale_;
    case DensityFamily::student_t: return df_ > 2.0 ? scale_ * scale_ * df_ / (df_ - 2.0) : kInf;
    case DensityFamily::cauchy: return kInf;
    case DensityFamily::normal_heavy_mixture:
      return (1.0 - weight_) * scale_ * scale_ + weight_ * component_->second_moment();
  }
  return kInf;
}

bool DensityModel::has_absolute_moment(double a) const {
  switch (family_) {
    case DensityFamily::normal:
    case DensityFamily::double_exponential: return true;
    case DensityFamily::student_t: return a < df_;
    case DensityFamily::cauchy: return a < 1.0;
    case DensityFamily::normal_heavy_mixture: return weight_ == 0.0 || component_->has_absolute_moment(a);
  }
  return false;
}

double DensityModel::width() const {
  if (family_ == DensityFamily::normal_heavy_mixture) return std::max(scale_, component_->width());
  return scale_;
}

double DensityModel::sample(std::mt19937_64& rng) const {
  switch (family_) {
    case DensityFamily::normal: return scale_ * std::normal_distribution<double>(0.0, 1.0)(rng);
    case DensityFamily::double_exponential: {
      const double e = std::exponential_distribution<double>(1.0)(rng);
      return std::bernoulli_distribution(0.5)(rng) ? scale_ * e : -scale_ * e;
    }
    case DensityFamily::student_t: return scale_ * std::student_t_distribution<double>(df_)(rng);
    case DensityFamily::cauchy: return std::cauchy_distribution<double>(0.0, scale_)(rng);
    case DensityFamily::normal_heavy_mixture:
      if (std::bernoulli_distribution(weight_)(rng)) return component_->sample(rng);
      return scale_ * std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  return 0.0;
}

DensityModel DensityModel::scaled(double factor) const {
  require_positive(factor, "scale factor");
  switch (family_) {
    case DensityFamily::normal: return normal(scale_ * factor);
    case DensityFamily::double_exponential: return double_exponential(scale_ * factor);
    case DensityFamily::student_t: return student_t(df_, scale_ * factor);
    case DensityFamily::cauchy: return cauchy(scale_ * factor);
    case DensityFamily::normal_heavy_mixture:
      return normal_heavy_mixture(scale_ * factor, weight_, component_->scaled(factor));
  }
  return *this;
}

std::string DensityModel::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(scale=" << scale_;
  if (family_ == DensityFamily::student_t) os << ", df=" << df_;
  if (family_ == DensityFamily::normal_heavy_mixture) os << ", weight=" << weight_ << ", component=" << component_->describe();
  os << ")";
  return os.str();
}

double pdf_inverse_positive(const DensityModel& model, double y) {
  const double peak = model.pdf(0.0);
  if (!(y > 0.0) || y > peak * (1.0 + 1e-15))
    throw DomainError("pdf_inverse_positive: y must lie in (0, pdf(0)]");
  const double target = std::log(y);
  if (target >= model.log_pdf(0.0)) return 0.0;

  double lo = 0.0;
  double hi = model.width();
  while (model.log_pdf(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("pdf_inverse_positive: y too small to bracket");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (model.log_pdf(mid) > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

ConditionReport check_regularity(const DensityModel& xi, const DensityModel& eta, double grid_max) {
  if (grid_max < 10.0) throw DomainError("check_regularity: grid_max must be >= 10");

  constexpr int kPerDecade = 200;
  constexpr double kGridMin = 1e-3;
  const int count = static_cast<int>(std::ceil(std::log10(grid_max / kGridMin) * kPerDecade)) + 1;
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] = kGridMin * std::pow(grid_max / kGridMin, static_cast<double>(i) / (count - 1));

  ConditionReport report;

  // (A3)
  double log_sup = -kInf;
  for (double x : grid) log_sup = std::max(log_sup, eta.log_pdf(x) - xi.log_pdf(x));
  log_sup = std::max(log_sup, eta.log_pdf(0.0) - xi.log_pdf(0.0));
  report.ratio_sup = std::exp(log_sup);
  const double tail_start = grid_max / 10.0;
  report.ratio_tail_growth =
      (eta.log_pdf(grid_max) - xi.log_pdf(grid_max)) - (eta.log_pdf(tail_start) - xi.log_pdf(tail_start));
  report.a3_pass = std::isfinite(report.ratio_sup) && report.ratio_sup < 1e12 && report.ratio_tail_growth <= 1e-3;

  // (A4) with C_delta = 1.
  report.delta = eta.tail_meta().delta;
  auto weighted = [&](double x) { return (2.0 + report.delta) * std::log(x) + eta.log_pdf(x); };
  double prev = weighted(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = weighted(grid[i]);
    if (cur > prev + 1e-12 * std::fabs(prev)) {
      report.a4_empirical_c_delta = grid[i];
      if (grid[i] > 1.0) ++report.a4_violations_beyond_c_delta;
    }
    prev = cur;
  }
  report.a4_pass = report.a4_empirical_c_delta < grid_max / 10.0;

  // (A1)/(A2): slope of log|f'/f| against log x over the last decade.
  auto fit_lambda = [&](const DensityModel& f) {
    const double x1 = tail_start, x2 = grid_max;
    const double g1 = std::fabs(f.log_pdf_derivative(x1));
    const double g2 = std::fabs(f.log_pdf_derivative(x2));
    if (g1 <= 0.0 || g2 <= 0.0) return 0.0;
    return std::max(0.0, std::log(g2 / g1) / std::log(x2 / x1));
  };
  report.lambda_xi_fit = fit_lambda(xi);
  report.lambda_eta_fit = fit_lambda(eta);
  report.a1_bounded = report.lambda_xi_fit < 0.5;
  report.a2_bounded = report.lambda_eta_fit < 0.5;
  return report;
}

}  // namespace wshrink

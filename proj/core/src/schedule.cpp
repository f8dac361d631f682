#include "wshrink/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wshrink/errors.hpp"
#include "wshrink/io.hpp"
#include "wshrink/wavelet.hpp"

namespace wshrink {

namespace {

constexpr double kSlack = 0.01;
constexpr int kDefaultCoarseLevel = 3;

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Level cutoffs and nu shared by every odds mode.
ShrinkagePlan base_plan(std::size_t n, const SmoothnessSpec& spec, const BayesModel& model,
                        const PlanOverrides& ov) {
  spec.validate();
  ShrinkagePlan plan;
  plan.n = n;
  plan.spec = spec;
  plan.combo = model.combo;
  plan.sigma = model.sigma;
  plan.J = dyadic_level(n);
  const double log2n = plan.J;
  const double r = spec.r, p = spec.p;

  plan.j0 = log2n / (2.0 * r + 1.0);
  const int requested_L = ov.coarse_level.value_or(kDefaultCoarseLevel);
  if (requested_L < 0) throw ConfigError("coarse level must be nonnegative");
  if (static_cast<std::size_t>(1) << std::min(requested_L + 2, 62) > n)
    throw ValidationError("n = " + std::to_string(n) + " is too small for coarse level " +
                          std::to_string(requested_L) + " (need n >= 2^(L+2))");
  plan.L = std::max(0, std::min(requested_L, static_cast<int>(std::floor(plan.j0))));

  if (p >= 2.0) {
    plan.j1 = plan.j0;
    plan.J0 = static_cast<int>(std::ceil(log2n / (2.0 * r)));
  } else {
    plan.j1 = r * log2n / ((r + 0.5 - 1.0 / p) * (2.0 * r + 1.0));
    plan.J0 = static_cast<int>(std::lround(0.5 * (log2n + plan.j1)));
  }
  plan.J0 = std::min(plan.J0, plan.J - 1);

  plan.C1 = ov.c1.value_or(1.0);
  if (!(plan.C1 > 0.0)) throw ConfigError("C1 must be positive");
  plan.error_model = model.is_mixture() ? *model.tail_error : model.error_at(plan.J0);

  const double s = 1.0 / p - 0.5;
  const double m1 = r + 0.5 - 0.5 * s;
  const double m2 = (r + 0.5) - s * (1.0 + 1.0 / r);
  const double m3 = r + 0.5;
  const int floor_j0 = static_cast<int>(std::floor(plan.j0));
  for (int j = plan.L; j < plan.J; ++j) {
    double m = m3;
    if (p < 2.0) {
      if (j <= floor_j0)
        m = m1;
      else if (j < plan.j1)
        m = m2;
    }
    plan.m.push_back(m);
    plan.nu.push_back(plan.C1 * std::exp2(m * j));
  }
  return plan;
}

void add_condition_warnings(ShrinkagePlan& plan, const BayesModel& model) {
  const RateMeta meta = expected_rate_meta(model.combo, plan.spec.r, plan.spec.p);
  const ConditionReport rep = check_regularity(model.prior, model.error_at(plan.L));
  plan.needs_beta_bound_low = meta.needs_beta_bound_low || !rep.a3_pass;
  if (plan.needs_beta_bound_low)
    plan.warnings.push_back("combo " + to_string(model.combo) +
                            ": error/prior tail ratio is unbounded; rates below j0 need the stricter beta "
                            "bound, which this schedule does not apply");
  if (meta.needs_tail_condition && plan.odds_mode != OddsMode::tail_suppressed)
    plan.warnings.push_back("combo " + to_string(model.combo) +
                            ": near-optimal rate for non-normal data errors needs tail suppression above J0");
}

}  // namespace

double SmoothnessSpec::r_p() const {
  if (p >= 2.0) return 0.0;
  const double s = 1.0 / p - 0.5;
  return 0.5 * (s + std::sqrt(s * s + 2.0 * s));
}

void SmoothnessSpec::validate() const {
  if (!(p >= 1.0)) throw ValidationError("p must be >= 1 (got " + num(p) + ")");
  if (!(q >= 1.0)) throw ValidationError("q must be >= 1 (got " + num(q) + ")");
  if (!(A > 0.0)) throw ValidationError("A must be positive");
  if (!(r > r_p()))
    throw ValidationError("smoothness r = " + num(r) + " must exceed r_p = 0.5[(1/p - 1/2) + sqrt((1/p - 1/2)^2 + "
                          "2(1/p - 1/2))] = " + num(r_p()) + " for p = " + num(p));
  const double lower = std::max(0.5, 1.0 / p);
  if (!(r > lower))
    throw ValidationError("smoothness r = " + num(r) + " must exceed max(1/2, 1/p) = " + num(lower));
}

std::string to_string(OddsMode mode) {
  switch (mode) {
    case OddsMode::power: return "power";
    case OddsMode::geometric: return "geometric";
    case OddsMode::tail_suppressed: return "tail_suppressed";
  }
  return "power";
}

double ShrinkagePlan::nu_at(int j) const { return nu.at(static_cast<std::size_t>(j - L)); }
double ShrinkagePlan::beta_at(int j) const { return beta.at(static_cast<std::size_t>(j - L)); }
double ShrinkagePlan::m_at(int j) const { return m.at(static_cast<std::size_t>(j - L)); }

std::pair<double, double> ShrinkagePlan::beta_range() const {
  if (beta.empty()) return {0.0, 0.0};
  const auto [lo, hi] = std::minmax_element(beta.begin(), beta.end());
  return {*lo, *hi};
}

double default_alpha_low(const SmoothnessSpec& spec, const DensityModel& error) {
  const TailMeta& t = error.tail_meta();
  double a = std::min(0.0, (2.0 + t.delta) / (2.0 * spec.r + 1.0) - 1.0 - kSlack);
  if (spec.p < 2.0 && t.gamma == 0.0) {
    const double bound = std::min(t.descent_nu - 3.0, t.descent_nu / (2.0 * spec.r + 2.0 - 1.0 / spec.p) - 1.0);
    a = std::min(a, bound - kSlack);
  }
  return a;
}

double default_alpha_mid(const SmoothnessSpec& spec) {
  // beta_j = 2^(j - j0) above j0 for p >= 2; beta_j = 1 for p < 2.
  return spec.p >= 2.0 ? -1.0 / (spec.r + 0.5) : 0.0;
}

ShrinkagePlan make_plan(std::size_t n, const SmoothnessSpec& spec, const BayesModel& model,
                        const PlanOverrides& overrides) {
  ShrinkagePlan plan = base_plan(n, spec, model, overrides);
  plan.odds_mode = OddsMode::power;
  plan.alpha_low = overrides.alpha_low.value_or(default_alpha_low(spec, model.error_at(plan.L)));
  plan.alpha_mid = overrides.alpha_mid.value_or(default_alpha_mid(spec));
  const double sn = std::sqrt(static_cast<double>(n));
  const int floor_j0 = static_cast<int>(std::floor(plan.j0));
  for (int j = plan.L; j < plan.J; ++j) {
    const double alpha = j <= floor_j0 ? plan.alpha_low : plan.alpha_mid;
    plan.beta.push_back(std::pow(sn / plan.nu_at(j), alpha));
  }

  if (model.is_mixture()) {
    const double weight = model.tail_error->mixture_weight();
    for (int j = std::max(plan.J0, plan.L); j < plan.J; ++j) {
      if (!(plan.beta_at(j) >= overrides.beta0))
        throw ValidationError("mixture error model needs beta_j >= beta0 = " + num(overrides.beta0) +
                              " for j >= J0 = " + std::to_string(plan.J0) + "; level " + std::to_string(j) +
                              " has beta = " + num(plan.beta_at(j)));
      if (!(weight <= overrides.c_lambda))
        throw ValidationError("mixture weight " + num(weight) + " exceeds the bound C_lambda = " +
                              num(overrides.c_lambda) + " for j >= J0");
    }
  }
  add_condition_warnings(plan, model);
  return plan;
}

ShrinkagePlan geometric_odds_plan(std::size_t n, const SmoothnessSpec& spec, const BayesModel& model, double b,
                                  const PlanOverrides& overrides) {
  if (!(b > 0.0)) throw ConfigError("geometric odds exponent b must be positive");
  ShrinkagePlan plan = base_plan(n, spec, model, overrides);
  plan.odds_mode = OddsMode::geometric;
  plan.odds_param = b;
  plan.alpha_low = std::numeric_limits<double>::quiet_NaN();
  plan.alpha_mid = std::numeric_limits<double>::quiet_NaN();
  for (int j = plan.L; j < plan.J; ++j) plan.beta.push_back(std::exp2(b * j));
  add_condition_warnings(plan, model);
  return plan;
}

ShrinkagePlan tail_suppressed_plan(const ShrinkagePlan& base, double c) {
  if (base.odds_mode != OddsMode::power) throw ConfigError("tail suppression applies to power-mode plans only");
  if (!(c > 0.0)) throw ConfigError("tail suppression constant c must be positive");
  ShrinkagePlan plan = base;
  plan.odds_mode = OddsMode::tail_suppressed;
  plan.odds_param = c;
  const double r = plan.spec.r;
  const double x = 2.0 * c * std::pow(static_cast<double>(plan.n), r / (2.0 * r + 1.0));
  const double log_eta = plan.error_model.log_pdf(x);
  for (int j = std::max(plan.J0, plan.L); j < plan.J; ++j) {
    const double log_beta = -log_eta - r * j / (2.0 * r + 1.0) * std::numbers::ln2;
    plan.beta[static_cast<std::size_t>(j - plan.L)] = std::exp(log_beta);
  }
  std::erase_if(plan.warnings, [](const std::string& w) { return w.find("tail suppression") != std::string::npos; });
  return plan;
}

std::string serialize_plan(const ShrinkagePlan& plan) {
  using io::format_double;
  std::ostringstream os;
  os << "n=" << plan.n << '\n'
     << "r=" << format_double(plan.spec.r) << '\n'
     << "p=" << format_double(plan.spec.p) << '\n'
     << "q=" << format_double(plan.spec.q) << '\n'
     << "A=" << format_double(plan.spec.A) << '\n'
     << "combo=" << to_string(plan.combo) << '\n'
     << "sigma=" << format_double(plan.sigma) << '\n'
     << "L=" << plan.L << '\n'
     << "J=" << plan.J << '\n'
     << "j0=" << format_double(plan.j0) << '\n'
     << "j1=" << format_double(plan.j1) << '\n'
     << "J0=" << plan.J0 << '\n'
     << "C1=" << format_double(plan.C1) << '\n'
     << "alpha_low=" << format_double(plan.alpha_low) << '\n'
     << "alpha_mid=" << format_double(plan.alpha_mid) << '\n'
     << "odds_mode=" << to_string(plan.odds_mode) << '\n'
     << "odds_param=" << format_double(plan.odds_param) << '\n'
     << "m=" << io::join_doubles(plan.m) << '\n'
     << "nu=" << io::join_doubles(plan.nu) << '\n'
     << "beta=" << io::join_doubles(plan.beta) << '\n';
  return os.str();
}

ShrinkagePlan parse_plan(const std::string& text) {
  const auto kv = io::parse_key_values(text);
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw InputError("plan is missing key '" + key + "'");
    return it->second;
  };
  ShrinkagePlan plan;
  plan.n = static_cast<std::size_t>(io::parse_int(get("n"), "n"));
  plan.spec.r = io::parse_double(get("r"), "r");
  plan.spec.p = io::parse_double(get("p"), "p");
  plan.spec.q = io::parse_double(get("q"), "q");
  plan.spec.A = io::parse_double(get("A"), "A");
  try {
    plan.combo = parse_combo(get("combo"));
  } catch (const ConfigError& e) {
    throw InputError(e.what());
  }
  plan.sigma = io::parse_double(get("sigma"), "sigma");
  plan.L = static_cast<int>(io::parse_int(get("L"), "L"));
  plan.J = static_cast<int>(io::parse_int(get("J"), "J"));
  plan.j0 = io::parse_double(get("j0"), "j0");
  plan.j1 = io::parse_double(get("j1"), "j1");
  plan.J0 = static_cast<int>(io::parse_int(get("J0"), "J0"));
  plan.C1 = io::parse_double(get("C1"), "C1");
  plan.alpha_low = io::parse_double(get("alpha_low"), "alpha_low");
  plan.alpha_mid = io::parse_double(get("alpha_mid"), "alpha_mid");
  const std::string& mode = get("odds_mode");
  if (mode == "power")
    plan.odds_mode = OddsMode::power;
  else if (mode == "geometric")
    plan.odds_mode = OddsMode::geometric;
  else if (mode == "tail_suppressed")
    plan.odds_mode = OddsMode::tail_suppressed;
  else
    throw InputError("unknown odds_mode '" + mode + "'");
  plan.odds_param = io::parse_double(get("odds_param"), "odds_param");
  plan.m = io::parse_double_list(get("m"), "m");
  plan.nu = io::parse_double_list(get("nu"), "nu");
  plan.beta = io::parse_double_list(get("beta"), "beta");
  const auto levels = static_cast<std::size_t>(plan.J - plan.L);
  if (plan.J <= plan.L || plan.nu.size() != levels || plan.beta.size() != levels || plan.m.size() != levels)
    throw InputError("plan arrays must hold one entry per level L..J-1");
  if (plan.n != (static_cast<std::size_t>(1) << plan.J)) throw InputError("plan n does not match J");
  ModelParams params;
  params.sigma = plan.sigma;
  const BayesModel model = make_model(plan.combo, params);
  plan.error_model = model.is_mixture() ? *model.tail_error : model.error;
  return plan;
}

BayesModel bind_model(const BayesModel& model, const ShrinkagePlan& plan) {
  BayesModel m = model;
  if (m.is_mixture()) m.tail_from_level = plan.J0;
  return m;
}

}  // namespace wshrink

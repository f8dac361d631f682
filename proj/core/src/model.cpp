#include "wshrink/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "wshrink/errors.hpp"

namespace wshrink {

namespace {

struct ComboName {
  ComboId id;
  const char* name;
};

constexpr ComboName kNames[] = {
    {ComboId::NN, "N-N"},     {ComboId::NDE, "N-DE"},   {ComboId::NT, "N-T"},   {ComboId::DEN, "DE-N"},
    {ComboId::DEDE, "DE-DE"}, {ComboId::DET, "DE-T"},   {ComboId::TN, "T-N"},   {ComboId::TDE, "T-DE"},
    {ComboId::TT, "T-T"},     {ComboId::NzN, "Nz-N"},   {ComboId::NzDE, "Nz-DE"}, {ComboId::NzT, "Nz-T"},
    {ComboId::TC, "T-C"},
};

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

enum class Kind { normal, dexp, t, cauchy, mixture };

std::pair<Kind, Kind> kinds(ComboId id) {
  switch (id) {
    case ComboId::NN: return {Kind::normal, Kind::normal};
    case ComboId::NDE: return {Kind::normal, Kind::dexp};
    case ComboId::NT: return {Kind::normal, Kind::t};
    case ComboId::DEN: return {Kind::dexp, Kind::normal};
    case ComboId::DEDE: return {Kind::dexp, Kind::dexp};
    case ComboId::DET: return {Kind::dexp, Kind::t};
    case ComboId::TN: return {Kind::t, Kind::normal};
    case ComboId::TDE: return {Kind::t, Kind::dexp};
    case ComboId::TT: return {Kind::t, Kind::t};
    case ComboId::NzN: return {Kind::mixture, Kind::normal};
    case ComboId::NzDE: return {Kind::mixture, Kind::dexp};
    case ComboId::NzT: return {Kind::mixture, Kind::t};
    case ComboId::TC: return {Kind::t, Kind::cauchy};
  }
  throw ConfigError("unknown combo");
}

}  // namespace

std::string to_string(ComboId id) {
  for (const auto& c : kNames)
    if (c.id == id) return c.name;
  throw ConfigError("unknown combo");
}

std::string valid_combo_list() {
  std::string out;
  for (const auto& c : kNames) {
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

ComboId parse_combo(const std::string& text) {
  const std::string key = upper(text);
  if (key == "C5") return ComboId::TC;
  for (const auto& c : kNames)
    if (upper(c.name) == key) return c.id;
  throw ConfigError("unknown combo '" + text + "'; valid ids: " + valid_combo_list());
}

const std::vector<ComboId>& all_combos() {
  static const std::vector<ComboId> ids = [] {
    std::vector<ComboId> v;
    for (const auto& c : kNames) v.push_back(c.id);
    return v;
  }();
  return ids;
}

const std::vector<ComboId>& grid_combos() {
  static const std::vector<ComboId> ids{ComboId::NN,  ComboId::NDE, ComboId::NT,  ComboId::DEN, ComboId::DEDE,
                                        ComboId::DET, ComboId::TN,  ComboId::TDE, ComboId::TT};
  return ids;
}

double RateMeta::expected_slope(double r, double p) const {
  const double extra = p >= 2.0 ? extra_power_p_ge_2 : extra_power_p_lt_2;
  return -2.0 * r / (2.0 * r + 1.0) + extra;
}

RateMeta expected_rate_meta(ComboId id, double r, double p, double error_df) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double varsigma = 4.0 * r + p * (2.0 * r + 1.0);
  const double light_log = 1.0 / (2.0 * r + 1.0);
  const double kappa = std::max(4.0 * r / varsigma, light_log);
  const double heavy_prior_power = 2.0 * r / ((2.0 * r + 1.0) * (2.0 * r + 2.0));
  RateMeta m;
  switch (id) {
    case ComboId::NN:
    case ComboId::NzN:
      m.log_power_p_lt_2 = 4.0 * r / varsigma;
      m.note = "optimal; p < 2 additionally needs sqrt(2) sigma < sigma0 <= sigma1";
      break;
    case ComboId::NDE:
    case ComboId::NT:
    case ComboId::NzDE:
    case ComboId::NzT:
      m.log_power_p_ge_2 = light_log;
      m.log_power_p_lt_2 = kappa;
      m.needs_tail_condition = id == ComboId::NDE || id == ComboId::NT;
      m.note = "optimal up to a log factor";
      break;
    case ComboId::DEN:
    case ComboId::TN:
      m.extra_power_p_ge_2 = heavy_prior_power;
      m.extra_power_p_lt_2 = nan;
      m.log_power_p_lt_2 = nan;
      m.needs_beta_bound_low = true;
      m.note = "suboptimal: rate n^(-2r/(2r+2))";
      break;
    case ComboId::DEDE:
    case ComboId::DET:
      m.log_power_p_lt_2 = 8.0 * r / varsigma;
      m.note = "optimal";
      break;
    case ComboId::TDE:
      m.extra_power_p_lt_2 = nan;
      m.log_power_p_lt_2 = nan;
      m.needs_beta_bound_low = true;
      m.note = "optimal only under the low-level beta bound";
      break;
    case ComboId::TT:
      m.extra_power_p_lt_2 = (2.0 * r + 2.0) / (r * (2.0 * r + 1.0) * (1.0 + error_df));
      m.log_power_p_lt_2 = -p;
      m.note = "optimal for p >= 2, polynomially suboptimal for p < 2";
      break;
    case ComboId::TC:
      m.extra_power_p_lt_2 = nan;
      m.log_power_p_lt_2 = nan;
      m.note = "heavy/heavy pair; optimal for p >= 2";
      break;
  }
  return m;
}

const DensityModel& BayesModel::error_at(int level) const {
  if (!per_level.empty()) {
    if (level < 0 || static_cast<std::size_t>(level) >= per_level.size())
      throw ConfigError("no error density for level " + std::to_string(level));
    return per_level[static_cast<std::size_t>(level)];
  }
  if (tail_error && level >= tail_from_level) return *tail_error;
  return error;
}

BayesModel BayesModel::with_sigma(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("sigma must be finite and positive");
  const double factor = s / sigma;
  BayesModel m = *this;
  m.error = error.scaled(factor);
  if (tail_error) m.tail_error = tail_error->scaled(factor);
  for (auto& e : m.per_level) e = e.scaled(factor);
  m.sigma = s;
  return m;
}

BayesModel make_model(ComboId id, const ModelParams& params) {
  if (!(params.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(params.prior_scale > 0.0)) throw ConfigError("prior scale must be positive");
  const auto [eta_kind, xi_kind] = kinds(id);
  BayesModel m;
  m.combo = id;
  m.sigma = params.sigma;
  switch (xi_kind) {
    case Kind::normal: m.prior = DensityModel::normal(params.prior_scale); break;
    case Kind::dexp: m.prior = DensityModel::double_exponential(params.prior_scale); break;
    case Kind::t: m.prior = DensityModel::student_t(params.prior_df, params.prior_scale); break;
    case Kind::cauchy: m.prior = DensityModel::cauchy(params.prior_scale); break;
    case Kind::mixture: throw ConfigError("mixture prior is not supported");
  }
  switch (eta_kind) {
    case Kind::normal: m.error = DensityModel::with_std(DensityFamily::normal, params.sigma); break;
    case Kind::dexp: m.error = DensityModel::with_std(DensityFamily::double_exponential, params.sigma); break;
    case Kind::t: m.error = DensityModel::with_std(DensityFamily::student_t, params.sigma, params.error_df); break;
    case Kind::cauchy: throw ConfigError("Cauchy error model is not supported");
    case Kind::mixture: {
      const double s0 = params.mixture_sigma0 > 0.0 ? params.mixture_sigma0 : params.sigma;
      m.error = DensityModel::normal(s0);
      const DensityModel zeta = DensityModel::with_std(DensityFamily::student_t, params.sigma, params.error_df);
      m.tail_error = DensityModel::normal_heavy_mixture(s0, params.mixture_weight, zeta);
      break;
    }
  }
  return m;
}

}  // namespace wshrink

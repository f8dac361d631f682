#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wshrink/density.hpp"
#include "wshrink/model.hpp"

namespace wshrink {

/// Besov smoothness class B^r_{p,q}(A).
struct SmoothnessSpec {
  double r = 1.0;
  double p = 2.0;
  double q = 2.0;
  double A = 1.0;  // ball radius, carried as metadata

  /// 0.5[(1/p - 1/2) + sqrt((1/p - 1/2)^2 + 2(1/p - 1/2))] for p < 2, else 0.
  double r_p() const;
  /// ValidationError quoting the violated bound.
  void validate() const;
};

enum class OddsMode { power, geometric, tail_suppressed };
std::string to_string(OddsMode mode);

struct PlanOverrides {
  std::optional<int> coarse_level;  // default 3, clamped to floor(j0)
  std::optional<double> c1;         // default 1
  std::optional<double> alpha_low;
  std::optional<double> alpha_mid;
  double beta0 = 0.5;     // lower bound on beta at j >= J0 for mixture errors
  double c_lambda = 0.5;  // upper bound on the mixture weight at j >= J0
};

/// Per-level hyperparameters. nu and beta are indexed by j - L for
/// j = L..J-1.
struct ShrinkagePlan {
  std::size_t n = 0;
  SmoothnessSpec spec;
  ComboId combo = ComboId::NN;
  double sigma = 1.0;  // error standard deviation the plan was built for
  int L = 0;
  int J = 0;
  double j0 = 0.0;
  double j1 = 0.0;  // equals j0 when p >= 2
  int J0 = 0;
  double C1 = 1.0;
  double alpha_low = 0.0;
  double alpha_mid = 0.0;
  OddsMode odds_mode = OddsMode::power;
  double odds_param = 0.0;  // b (geometric) or c (tail_suppressed)
  std::vector<double> m;     // level exponent used for nu
  std::vector<double> nu;
  std::vector<double> beta;  // may contain +inf
  DensityModel error_model = DensityModel::normal();  // eta at level J0
  std::vector<std::string> warnings;
  // Set when the pair fails the prior/error tail-ratio condition, so the
  // power schedule below j0 is outside the range the rate statement covers.
  bool needs_beta_bound_low = false;

  double nu_at(int j) const;
  double beta_at(int j) const;
  double m_at(int j) const;
  /// Smallest and largest finite-or-infinite beta over the detail levels.
  std::pair<double, double> beta_range() const;
};

/// Power-mode plan: nu_j = C1 2^(m(j) j), beta_j = (sqrt(n)/nu_j)^alpha(j).
ShrinkagePlan make_plan(std::size_t n, const SmoothnessSpec& spec, const BayesModel& model,
                        const PlanOverrides& overrides = {});

/// Same cutoffs and nu; beta_j = 2^(b j).
ShrinkagePlan geometric_odds_plan(std::size_t n, const SmoothnessSpec& spec, const BayesModel& model, double b,
                                  const PlanOverrides& overrides = {});

/// For j >= J0: beta_j = 1 / (eta(2c n^(r/(2r+1))) 2^(rj/(2r+1))). Other levels unchanged.
ShrinkagePlan tail_suppressed_plan(const ShrinkagePlan& base, double c);

/// Default alpha below j0 for a combo (error tail exponents) and spec.
double default_alpha_low(const SmoothnessSpec& spec, const DensityModel& error);
double default_alpha_mid(const SmoothnessSpec& spec);

/// Flat `key=value` block; arrays are comma separated.
std::string serialize_plan(const ShrinkagePlan& plan);
/// Inverse of serialize_plan. The error model is rebuilt from the combo
/// with the serialized sigma. InputError on malformed text.
ShrinkagePlan parse_plan(const std::string& text);

/// Model bound to a plan: mixture error densities start at level J0.
BayesModel bind_model(const BayesModel& model, const ShrinkagePlan& plan);

}  // namespace wshrink

#pragma once

#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "wshrink/density.hpp"

namespace wshrink {

/// (error model, prior) pairs. The first letter names the error density
/// eta, the second the prior xi. Nz-* use a normal/heavy mixture error;
/// T-C is the Cauchy prior with t5 errors.
enum class ComboId { NN, NDE, NT, DEN, DEDE, DET, TN, TDE, TT, NzN, NzDE, NzT, TC };

std::string to_string(ComboId id);
/// Accepts the canonical ids ("DE-T") case-insensitively, and "C5" for T-C.
/// ConfigError listing every valid id otherwise.
ComboId parse_combo(const std::string& text);
const std::vector<ComboId>& all_combos();
/// The nine plain pairs over {normal, double exponential, t}.
const std::vector<ComboId>& grid_combos();
std::string valid_combo_list();

/// Predicted deviation from the minimax rate n^(-2r/(2r+1)).
struct RateMeta {
  // Extra polynomial exponent of n in n^(2r/(2r+1)) * risk.
  double extra_power_p_ge_2 = 0.0;
  double extra_power_p_lt_2 = 0.0;
  // Power of ln n in the same quantity (0 when the rate is exact).
  double log_power_p_ge_2 = 0.0;
  double log_power_p_lt_2 = 0.0;
  bool needs_beta_bound_low = false;  // beta condition below j0 (A3 fails)
  bool needs_tail_condition = false;  // tail suppression above J0 for non-normal errors
  std::string note;

  /// Slope of log risk against log n ignoring log factors.
  double expected_slope(double r, double p) const;
};

/// NaN powers mark cells with no stated rate (p < 2 for DE-N, T-N, T-DE, T-C).
RateMeta expected_rate_meta(ComboId id, double r, double p, double error_df = 5.0);

struct ModelParams {
  double sigma = 1.0;         // error standard deviation (data scale)
  double prior_scale = 1.0;   // scale of xi
  double error_df = 5.0;      // df of t errors / mixture component
  double prior_df = 5.0;      // df of t prior
  double mixture_weight = 0.5;
  double mixture_sigma0 = 0.0;  // normal core of the mixture; 0 means sigma
};

/// Prior xi and (possibly level-dependent) error densities eta_j.
struct BayesModel {
  ComboId combo = ComboId::NN;
  DensityModel prior = DensityModel::normal();
  DensityModel error = DensityModel::normal();  // eta_j below tail_from_level
  std::optional<DensityModel> tail_error;       // eta_j from tail_from_level on
  int tail_from_level = INT_MAX;
  std::vector<DensityModel> per_level;  // overrides when non-empty; index j

  const DensityModel& error_at(int level) const;
  bool is_mixture() const { return tail_error.has_value(); }
  /// Copy with every error density rescaled to standard deviation sigma
  /// (mixture core and component rescaled by the same factor).
  BayesModel with_sigma(double sigma) const;

  double sigma = 1.0;  // standard deviation the error densities were built for
};

/// Builds the densities for a combo. Mixture combos use a normal error
/// below `tail_from_level` and the mixture from there on; bind the level
/// with make_plan's J0 via BayesModel::tail_from_level.
BayesModel make_model(ComboId id, const ModelParams& params = {});

}  // namespace wshrink

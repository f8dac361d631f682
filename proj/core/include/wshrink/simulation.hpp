#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wshrink/density.hpp"
#include "wshrink/model.hpp"
#include "wshrink/schedule.hpp"
#include "wshrink/signals.hpp"
#include "wshrink/wavelet.hpp"

namespace wshrink {

enum class NoiseDomain { data, wavelet };

struct NoiseSpec {
  NoiseDomain domain = NoiseDomain::data;
  DensityFamily family = DensityFamily::normal;
  double df = 5.0;     // student_t only
  double sigma = 1.0;  // standard deviation per sample (Cauchy: scale)

  /// Noise density with standard deviation sigma.
  DensityModel density() const;
  void validate() const;
};

/// Data domain: x_i + eps_i. Wavelet domain: eps added to every coefficient
/// of the orthonormal transform, then inverted, which gives uncorrelated
/// but dependent errors for non-normal families.
Signal add_noise(const Signal& x, const NoiseSpec& spec, std::mt19937_64& rng, const FilterBank* bank = nullptr);

enum class PlanKind { power, geometric, tail_suppressed };

struct ExperimentSpec {
  SignalName signal = SignalName::critical;
  SignalParams signal_params;
  std::vector<std::size_t> ns{512};
  std::vector<ComboId> combos{ComboId::NN};
  NoiseSpec noise;
  SmoothnessSpec smoothness;
  ModelParams model_params;  // sigma is taken from the noise spec
  PlanOverrides overrides;
  PlanKind plan_kind = PlanKind::power;
  double odds_param = 1.0;  // b (geometric) or c (tail_suppressed)
  int replicates = 1;
  std::uint64_t master_seed = 1;
  WaveletFamily wavelet = WaveletFamily::coiflet;
  int wavelet_order = 3;
  bool tabulate = true;
  bool acknowledge_flagged = false;
  int jobs = 1;

  void validate() const;  // ConfigError
};

struct ExperimentRow {
  ComboId combo = ComboId::NN;
  std::string signal;
  std::size_t n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;  // NaN when the (combo, n) cell was skipped
};

struct SummaryRow {
  std::string combo;
  std::size_t n = 0;
  double median_mse = 0.0;
  double mean_mse = 0.0;
  double stderr_mse = 0.0;
  int count = 0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // sorted by (combo id, n, replicate)
  std::vector<SummaryRow> summary;  // same combo order as rows, then n
  std::vector<std::string> warnings;
};

/// Stable 64-bit mix of the four indices (splitmix64 finaliser chain).
std::uint64_t derive_seed(std::uint64_t master_seed, int combo_index, std::size_t n, int replicate);

/// Builds the plan the runner uses for one (combo, n) cell.
ShrinkagePlan experiment_plan(const ExperimentSpec& spec, const BayesModel& model, std::size_t n);
BayesModel experiment_model(const ExperimentSpec& spec, ComboId combo);

/// Deterministic for a fixed spec, independent of spec.jobs.
ExperimentResult run_experiment(const ExperimentSpec& spec);

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows);

/// `key = value` config; experiment_config_keys() lists the keys.
ExperimentSpec parse_experiment_config(const std::string& text);
const std::vector<std::pair<std::string, std::string>>& experiment_config_keys();

std::string rows_csv(const ExperimentResult& result);
std::string summary_csv(const ExperimentResult& result);
/// Parses a summary CSV (header combo,n,median_mse,mean_mse,stderr).
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

}  // namespace wshrink

#include "wshrink/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "wshrink/errors.hpp"
#include "wshrink/estimator.hpp"
#include "wshrink/io.hpp"

namespace wshrink {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int combo_index(ComboId id) {
  const auto& all = all_combos();
  return static_cast<int>(std::find(all.begin(), all.end(), id) - all.begin());
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InputError(key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = io::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

DensityModel NoiseSpec::density() const {
  validate();
  return DensityModel::with_std(family, sigma, df);
}

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise sigma must be finite and >= 0");
  if (family == DensityFamily::normal_heavy_mixture) throw ConfigError("mixture noise is not supported");
  if (family == DensityFamily::student_t && !(df > 0.0)) throw ConfigError("noise df must be positive");
}

Signal add_noise(const Signal& x, const NoiseSpec& spec, std::mt19937_64& rng, const FilterBank* bank) {
  spec.validate();
  if (spec.sigma == 0.0) return x;
  const DensityModel eps = spec.density();
  if (spec.domain == NoiseDomain::data) {
    Signal y = x;
    for (double& v : y) v += eps.sample(rng);
    return y;
  }
  const FilterBank& b = bank ? *bank : default_filter_bank();
  WaveletCoefficients c = dwt(x, 0, b);
  for (double& v : c.scaling) v += eps.sample(rng);
  for (auto& band : c.details)
    for (double& v : band) v += eps.sample(rng);
  return idwt(c, b);
}

void ExperimentSpec::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (ns.empty()) throw ConfigError("at least one sample size is required");
  if (combos.empty()) throw ConfigError("at least one combo is required");
  for (std::size_t n : ns) {
    try {
      dyadic_level(n);
    } catch (const InputError&) {
      throw ConfigError("sample size " + std::to_string(n) + " is not a power of two");
    }
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  noise.validate();
}

std::uint64_t derive_seed(std::uint64_t master_seed, int combo_index, std::size_t n, int replicate) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(combo_index));
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ static_cast<std::uint64_t>(replicate));
  return h;
}

BayesModel experiment_model(const ExperimentSpec& spec, ComboId combo) {
  ModelParams params = spec.model_params;
  params.sigma = spec.noise.sigma > 0.0 ? spec.noise.sigma : 1.0;
  return make_model(combo, params);
}

ShrinkagePlan experiment_plan(const ExperimentSpec& spec, const BayesModel& model, std::size_t n) {
  switch (spec.plan_kind) {
    case PlanKind::power: return make_plan(n, spec.smoothness, model, spec.overrides);
    case PlanKind::geometric:
      return geometric_odds_plan(n, spec.smoothness, model, spec.odds_param, spec.overrides);
    case PlanKind::tail_suppressed:
      return tail_suppressed_plan(make_plan(n, spec.smoothness, model, spec.overrides), spec.odds_param);
  }
  throw ConfigError("unknown plan kind");
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows) {
  std::vector<SummaryRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t k = i;
    std::vector<double> v;
    while (k < rows.size() && rows[k].combo == rows[i].combo && rows[k].n == rows[i].n) {
      if (!std::isnan(rows[k].mse)) v.push_back(rows[k].mse);
      ++k;
    }
    if (!v.empty()) {
      SummaryRow s;
      s.combo = to_string(rows[i].combo);
      s.n = rows[i].n;
      s.count = static_cast<int>(v.size());
      s.mean_mse = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      std::vector<double> sorted = v;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t m = sorted.size();
      s.median_mse = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean_mse) * (x - s.mean_mse);
      s.stderr_mse = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0;
      out.push_back(s);
    }
    i = k;
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;

  std::vector<ComboId> combos = spec.combos;
  std::sort(combos.begin(), combos.end(), [](ComboId a, ComboId b) { return combo_index(a) < combo_index(b); });
  combos.erase(std::unique(combos.begin(), combos.end()), combos.end());
  std::vector<std::size_t> ns = spec.ns;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  const FilterBank& bank = filter_bank(spec.wavelet, spec.wavelet_order);
  SignalParams sp = spec.signal_params;
  sp.bank = &bank;
  std::map<std::size_t, Signal> truth;
  for (std::size_t n : ns) truth.emplace(n, test_signal(spec.signal, n, sp));

  struct Cell {
    ComboId combo;
    std::size_t n;
    BayesModel model;
    std::optional<ShrinkagePlan> plan;
  };
  std::vector<Cell> cells;
  for (ComboId c : combos) {
    const BayesModel model = experiment_model(spec, c);
    bool flagged_reported = false;
    for (std::size_t n : ns) {
      Cell cell{c, n, model, std::nullopt};
      try {
        cell.plan = experiment_plan(spec, model, n);
        if (cell.plan->needs_beta_bound_low && !spec.acknowledge_flagged && !flagged_reported) {
          for (const auto& w : cell.plan->warnings)
            if (w.find("tail ratio") != std::string::npos) result.warnings.push_back(w);
          flagged_reported = true;
        }
      } catch (const ValidationError& e) {
        result.warnings.push_back("skipped " + to_string(c) + " at n=" + std::to_string(n) + ": " + e.what());
      }
      cells.push_back(std::move(cell));
    }
  }

  const auto reps = static_cast<std::size_t>(spec.replicates);
  result.rows.resize(cells.size() * reps);
  for (std::size_t ci = 0; ci < cells.size(); ++ci)
    for (std::size_t r = 0; r < reps; ++r) {
      ExperimentRow& row = result.rows[ci * reps + r];
      row.combo = cells[ci].combo;
      row.signal = to_string(spec.signal);
      row.n = cells[ci].n;
      row.replicate = static_cast<int>(r);
      row.seed = derive_seed(spec.master_seed, combo_index(row.combo), row.n, row.replicate);
      row.mse = std::numeric_limits<double>::quiet_NaN();
    }

  ShrinkCache cache;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= result.rows.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      ExperimentRow& row = result.rows[task];
      const Cell& cell = cells[task / reps];
      if (!cell.plan) continue;
      try {
        std::mt19937_64 rng(row.seed);
        const Signal& x = truth.at(row.n);
        const Signal y = add_noise(x, spec.noise, rng, &bank);
        DenoiseOptions opt;
        opt.bank = &bank;
        opt.tabulate = spec.tabulate;
        opt.cache = &cache;
        const Signal fhat = denoise(y, cell.model, *cell.plan, opt);
        double ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) ss += (fhat[i] - x[i]) * (fhat[i] - x[i]);
        row.mse = ss / static_cast<double>(x.size());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(result.rows.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.summary = summarize(result.rows);
  return result;
}

const std::vector<std::pair<std::string, std::string>>& experiment_config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys{
      {"signal", "blocks | bumps | doppler | heavisine | spike | critical"},
      {"ns", "comma-separated powers of two"},
      {"combos", "comma-separated combo ids (" + valid_combo_list() + ")"},
      {"replicates", "Monte-Carlo replicates per (combo, n)"},
      {"seed", "master seed (unsigned 64-bit)"},
      {"noise_domain", "data | wavelet"},
      {"noise_family", "normal | double_exponential | student_t | cauchy"},
      {"noise_df", "degrees of freedom for student_t noise"},
      {"sigma", "noise standard deviation"},
      {"r", "smoothness r"},
      {"p", "Besov p"},
      {"q", "Besov q"},
      {"plan", "power | geometric | tail_suppressed"},
      {"odds_param", "b for geometric odds, c for tail suppression"},
      {"C1", "nu scale constant"},
      {"alpha_low", "beta exponent for j <= j0"},
      {"alpha_mid", "beta exponent for j > j0"},
      {"coarse_level", "coarsest level L"},
      {"wavelet", "haar | daubechies | coiflet"},
      {"wavelet_order", "filter order"},
      {"prior_scale", "scale of the prior density"},
      {"prior_df", "df of a t prior"},
      {"error_df", "df of t errors and of the mixture component"},
      {"mixture_weight", "heavy-tail weight of the mixture error model"},
      {"rescale", "rescale closed-form signals to unit standard deviation (true/false)"},
      {"spike_level", "level of the spike signal"},
      {"amplitude", "spike amplitude"},
      {"critical_c", "constant of the critical signal"},
      {"tabulate", "interpolate shrinkage rules (true/false)"},
      {"acknowledge_flagged", "suppress the warning for pairs with an unbounded tail ratio"},
      {"jobs", "worker threads"},
  };
  return keys;
}

ExperimentSpec parse_experiment_config(const std::string& text) {
  const auto kv = io::parse_key_values(text);
  ExperimentSpec spec;
  for (const auto& [key, value] : kv) {
    const auto& keys = experiment_config_keys();
    if (std::none_of(keys.begin(), keys.end(), [&](const auto& k) { return k.first == key; }))
      throw InputError("unknown config key '" + key + "'");
    try {
      if (key == "signal") {
        spec.signal = parse_signal_name(value);
      } else if (key == "ns") {
        spec.ns.clear();
        for (const auto& s : split_list(value)) {
          const long long n = io::parse_int(s, "ns");
          if (n <= 0) throw InputError("ns: sample sizes must be positive");
          spec.ns.push_back(static_cast<std::size_t>(n));
        }
      } else if (key == "combos") {
        spec.combos.clear();
        for (const auto& s : split_list(value)) spec.combos.push_back(parse_combo(s));
      } else if (key == "replicates") {
        spec.replicates = static_cast<int>(io::parse_int(value, key));
      } else if (key == "seed") {
        spec.master_seed = std::stoull(value);
      } else if (key == "noise_domain") {
        if (value == "data")
          spec.noise.domain = NoiseDomain::data;
        else if (value == "wavelet")
          spec.noise.domain = NoiseDomain::wavelet;
        else
          throw InputError("noise_domain must be data or wavelet");
      } else if (key == "noise_family") {
        if (value == "normal")
          spec.noise.family = DensityFamily::normal;
        else if (value == "double_exponential")
          spec.noise.family = DensityFamily::double_exponential;
        else if (value == "student_t")
          spec.noise.family = DensityFamily::student_t;
        else if (value == "cauchy")
          spec.noise.family = DensityFamily::cauchy;
        else
          throw InputError("unknown noise_family '" + value + "'");
      } else if (key == "noise_df") {
        spec.noise.df = io::parse_double(value, key);
      } else if (key == "sigma") {
        spec.noise.sigma = io::parse_double(value, key);
      } else if (key == "r") {
        spec.smoothness.r = io::parse_double(value, key);
        spec.signal_params.r = spec.smoothness.r;
      } else if (key == "p") {
        spec.smoothness.p = io::parse_double(value, key);
      } else if (key == "q") {
        spec.smoothness.q = io::parse_double(value, key);
      } else if (key == "plan") {
        if (value == "power")
          spec.plan_kind = PlanKind::power;
        else if (value == "geometric")
          spec.plan_kind = PlanKind::geometric;
        else if (value == "tail_suppressed")
          spec.plan_kind = PlanKind::tail_suppressed;
        else
          throw InputError("unknown plan '" + value + "'");
      } else if (key == "odds_param") {
        spec.odds_param = io::parse_double(value, key);
      } else if (key == "C1") {
        spec.overrides.c1 = io::parse_double(value, key);
      } else if (key == "alpha_low") {
        spec.overrides.alpha_low = io::parse_double(value, key);
      } else if (key == "alpha_mid") {
        spec.overrides.alpha_mid = io::parse_double(value, key);
      } else if (key == "coarse_level") {
        spec.overrides.coarse_level = static_cast<int>(io::parse_int(value, key));
      } else if (key == "wavelet") {
        spec.wavelet = parse_wavelet_family(value);
      } else if (key == "wavelet_order") {
        spec.wavelet_order = static_cast<int>(io::parse_int(value, key));
      } else if (key == "prior_scale") {
        spec.model_params.prior_scale = io::parse_double(value, key);
      } else if (key == "prior_df") {
        spec.model_params.prior_df = io::parse_double(value, key);
      } else if (key == "error_df") {
        spec.model_params.error_df = io::parse_double(value, key);
      } else if (key == "mixture_weight") {
        spec.model_params.mixture_weight = io::parse_double(value, key);
      } else if (key == "rescale") {
        spec.signal_params.rescale = parse_bool(value, key);
      } else if (key == "spike_level") {
        spec.signal_params.spike_level = static_cast<int>(io::parse_int(value, key));
      } else if (key == "amplitude") {
        spec.signal_params.amplitude = io::parse_double(value, key);
      } else if (key == "critical_c") {
        spec.signal_params.critical_c = io::parse_double(value, key);
      } else if (key == "tabulate") {
        spec.tabulate = parse_bool(value, key);
      } else if (key == "acknowledge_flagged") {
        spec.acknowledge_flagged = parse_bool(value, key);
      } else if (key == "jobs") {
        spec.jobs = static_cast<int>(io::parse_int(value, key));
      }
    } catch (const ConfigError& e) {
      throw InputError(key + ": " + e.what());
    } catch (const std::invalid_argument&) {
      throw InputError(key + ": invalid value '" + value + "'");
    } catch (const std::out_of_range&) {
      throw InputError(key + ": value out of range '" + value + "'");
    }
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw InputError(e.what());
  }
  return spec;
}

std::string rows_csv(const ExperimentResult& result) {
  std::string out = "combo,signal,n,replicate,seed,mse\n";
  for (const auto& r : result.rows) {
    out += to_string(r.combo) + "," + r.signal + "," + std::to_string(r.n) + "," + std::to_string(r.replicate) + "," +
           std::to_string(r.seed) + "," + io::format_double(r.mse) + "\n";
  }
  return out;
}

std::string summary_csv(const ExperimentResult& result) {
  std::string out = "combo,n,median_mse,mean_mse,stderr\n";
  for (const auto& s : result.summary) {
    out += s.combo + "," + std::to_string(s.n) + "," + io::format_double(s.median_mse) + "," +
           io::format_double(s.mean_mse) + "," + io::format_double(s.stderr_mse) + "\n";
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || io::trim(line) != "combo,n,median_mse,mean_mse,stderr")
    throw InputError("summary CSV must start with the header combo,n,median_mse,mean_mse,stderr");
  std::vector<SummaryRow> out;
  int lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    line = io::trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) f.push_back(io::trim(item));
    const std::string where = "summary line " + std::to_string(lineno);
    if (f.size() != 5) throw InputError(where + ": expected 5 fields");
    SummaryRow s;
    s.combo = f[0];
    const long long n = io::parse_int(f[1], where + " n");
    if (n <= 0) throw InputError(where + ": n must be positive");
    s.n = static_cast<std::size_t>(n);
    s.median_mse = io::parse_double(f[2], where + " median_mse");
    s.mean_mse = io::parse_double(f[3], where + " mean_mse");
    s.stderr_mse = io::parse_double(f[4], where + " stderr");
    out.push_back(s);
  }
  return out;
}

}  // namespace wshrink

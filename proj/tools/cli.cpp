#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "svg.hpp"
#include "wshrink/analysis.hpp"
#include "wshrink/errors.hpp"
#include "wshrink/estimator.hpp"
#include "wshrink/io.hpp"
#include "wshrink/model.hpp"
#include "wshrink/schedule.hpp"
#include "wshrink/simulation.hpp"

namespace wshrink::cli {

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

void print_plan(const ShrinkagePlan& plan, std::ostream& out) {
  const auto [lo, hi] = plan.beta_range();
  out << "plan: n=" << plan.n << " combo=" << to_string(plan.combo) << " L=" << plan.L << " J=" << plan.J
      << " j0=" << fmt("%.4g", plan.j0) << " j1=" << fmt("%.4g", plan.j1) << " J0=" << plan.J0
      << " beta_range=[" << io::format_double(lo) << ", " << io::format_double(hi) << "]\n";
  for (int j = plan.L; j < plan.J; ++j)
    out << "  level " << j << ": nu=" << fmt("%.6g", plan.nu_at(j)) << " beta=" << fmt("%.6g", plan.beta_at(j))
        << "\n";
  for (const auto& w : plan.warnings) out << "warning: " << w << "\n";
}

std::string config_help() {
  std::string text = "Config keys (key = value, '#' starts a comment):\n";
  for (const auto& [key, doc] : experiment_config_keys()) text += "  " + key + ": " + doc + "\n";
  return text;
}

}  // namespace

CommandResult cmd_denoise(const DenoiseArgs& args, std::ostream& out) {
  const ComboId id = parse_combo(args.combo);
  SmoothnessSpec spec;
  spec.r = args.r;
  spec.p = args.p;
  spec.q = args.q;
  spec.validate();

  const Signal y = io::read_signal(args.input);
  double sigma = 0.0;
  if (args.sigma == "auto") {
    sigma = estimate_sigma(y);
    if (!(sigma > 0.0)) throw InputError("cannot estimate the noise level: finest detail coefficients are all zero");
    out << "estimated sigma: " << io::format_double(sigma) << "\n";
  } else {
    sigma = io::parse_double(args.sigma, "--sigma");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("--sigma must be positive or 'auto'");
  }

  ModelParams params;
  params.sigma = sigma;
  const BayesModel model = make_model(id, params);
  PlanOverrides overrides;
  overrides.c1 = args.c1;
  overrides.coarse_level = args.coarse_level;
  const ShrinkagePlan plan = make_plan(y.size(), spec, model, overrides);
  print_plan(plan, out);

  const Signal fhat = denoise(y, model, plan);
  io::write_signal(args.output, fhat);
  return {kOk, {args.output}};
}

CommandResult cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec = parse_experiment_config(io::read_file(args.config));
  if (args.jobs) {
    if (*args.jobs < 1) throw ConfigError("--jobs must be >= 1");
    spec.jobs = *args.jobs;
  }
  const ExperimentResult result = run_experiment(spec);
  for (const auto& w : result.warnings) err << "wshrink: warning: " << one_line(w) << "\n";

  std::filesystem::create_directories(args.out_dir);
  const auto rows_path = args.out_dir / "results.csv";
  const auto summary_path = args.out_dir / "summary.csv";
  io::atomic_write(rows_path, rows_csv(result));
  io::atomic_write(summary_path, summary_csv(result));
  out << "wrote " << result.rows.size() << " rows to " << rows_path.string() << "\n";
  out << "wrote " << result.summary.size() << " summary rows to " << summary_path.string() << "\n";
  return {kOk, {rows_path, summary_path}};
}

CommandResult cmd_rate(const RateArgs& args, std::ostream& out) {
  const std::vector<SummaryRow> rows = parse_summary_csv(io::read_file(args.summary));
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, double>> by_combo;
  for (const auto& r : rows) {
    if (!by_combo.count(r.combo)) order.push_back(r.combo);
    if (!by_combo[r.combo].emplace(r.n, r.mean_mse).second)
      throw InputError("summary has two rows for combo " + r.combo + " at n=" + std::to_string(r.n));
  }

  if (args.expected_r) {
    const double r = *args.expected_r;
    if (!(r > 0.0)) throw ConfigError("--expected-r must be positive");
    out << "reference slope " << fmt("%.3f", -2.0 * r / (2.0 * r + 1.0)) << " (r = " << fmt("%g", r) << ")\n";
  }

  std::vector<svg::Series> series;
  for (const auto& combo : order) {
    const auto& pts = by_combo[combo];
    svg::Series s{combo, {}};
    std::vector<double> ns, risks;
    for (const auto& [n, risk] : pts) {
      ns.push_back(static_cast<double>(n));
      risks.push_back(risk);
      s.points.emplace_back(static_cast<double>(n), risk);
    }
    series.push_back(std::move(s));
    if (ns.size() < 3) {
      out << combo << ": insufficient points (" << ns.size() << " sample sizes, need 3)\n";
      continue;
    }
    const RateFit fit = fit_rate(ns, risks);
    out << combo << ": slope " << fmt("%.3f", fit.slope) << " \xC2\xB1 " << fmt("%.3f", fit.slope_stderr) << " ("
        << ns.size() << " points)";
    if (args.expected_r) {
      try {
        const double e = expected_rate_meta(parse_combo(combo), *args.expected_r, args.p).expected_slope(*args.expected_r, args.p);
        if (std::isfinite(e)) out << " expected " << fmt("%.3f", e);
      } catch (const ConfigError&) {
      }
    }
    out << "\n";
  }

  CommandResult res;
  if (args.plot) {
    io::atomic_write(*args.plot, svg::loglog_chart(series, "n", "mean MSE"));
    res.artifacts.push_back(*args.plot);
  }
  return res;
}

CommandResult run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian wavelet shrinkage", "wshrink"};
  app.require_subcommand(1);

  DenoiseArgs d;
  auto* den = app.add_subcommand("denoise", "denoise a signal file");
  den->add_option("--input", d.input, "signal file, one value per line")->required();
  den->add_option("--output", d.output, "output signal file")->required();
  den->add_option("--combo", d.combo, "model combo: " + valid_combo_list())->required();
  den->add_option("--r", d.r, "smoothness r")->required();
  den->add_option("--p", d.p, "Besov p")->required();
  den->add_option("--q", d.q, "Besov q")->capture_default_str();
  den->add_option("--c1", d.c1, "nu scale constant");
  den->add_option("--sigma", d.sigma, "noise standard deviation or 'auto'")->capture_default_str();
  den->add_option("--coarse-level", d.coarse_level, "coarsest level L");

  SimulateArgs s;
  auto* sim = app.add_subcommand("simulate", "run a Monte-Carlo experiment grid");
  sim->add_option("--config", s.config, "experiment config file")->required();
  sim->add_option("--out-dir", s.out_dir, "directory for results.csv and summary.csv")->required();
  sim->add_option("--jobs", s.jobs, "worker threads (overrides the config)");
  sim->footer(config_help());

  RateArgs r;
  auto* rate = app.add_subcommand("rate", "fit log-log risk slopes from a summary CSV");
  rate->add_option("--summary", r.summary, "summary CSV")->required();
  rate->add_option("--plot", r.plot, "write a log-log SVG chart");
  rate->add_option("--expected-r", r.expected_r, "print the minimax reference slope for this r");
  rate->add_option("--p", r.p, "Besov p for the per-combo expected slope")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {kOk, {}};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {kOk, {}};
  } catch (const CLI::ParseError& e) {
    err << "wshrink: error[usage]: " << one_line(e.what()) << "\n";
    return {kUsage, {}};
  }

  const auto fail = [&](int code, const char* kind, const std::string& what) {
    err << "wshrink: error[" << kind << "]: " << one_line(what) << "\n";
    return CommandResult{code, {}};
  };
  try {
    if (den->parsed()) return cmd_denoise(d, out);
    if (sim->parsed()) return cmd_simulate(s, out, err);
    return cmd_rate(r, out);
  } catch (const ConfigError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const ValidationError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const DomainError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const InputError& e) {
    return fail(kInput, "input", e.what());
  } catch (const NumericError& e) {
    return fail(kNumeric, "numeric", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kInput, "input", e.what());
  }
}

}  // namespace wshrink::cli

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wshrink::cli {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kNumeric = 3 };

struct CommandResult {
  int exit_code = kOk;
  std::vector<std::filesystem::path> artifacts;
};

struct DenoiseArgs {
  std::filesystem::path input;
  std::filesystem::path output;
  std::string combo;
  double r = 0.0;
  double p = 0.0;
  double q = 2.0;
  std::optional<double> c1;
  std::string sigma = "1";  // number or "auto"
  std::optional<int> coarse_level;
};

struct SimulateArgs {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<int> jobs;
};

struct RateArgs {
  std::filesystem::path summary;
  std::optional<std::filesystem::path> plot;
  std::optional<double> expected_r;
  double p = 2.0;
};

// Each command throws the library's exceptions; run() maps them to exit codes.
CommandResult cmd_denoise(const DenoiseArgs& args, std::ostream& out);
CommandResult cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
CommandResult cmd_rate(const RateArgs& args, std::ostream& out);

/// Parses argv (without the program name) and dispatches. Errors are
/// reported as one line `wshrink: error[<kind>]: <message>` on `err`.
CommandResult run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wshrink::cli

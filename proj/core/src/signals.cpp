#include "wshrink/signals.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "wshrink/errors.hpp"

namespace wshrink {

namespace {

constexpr std::array<double, 11> kPos = {0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81};
constexpr std::array<double, 11> kBlockHeight = {4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
constexpr std::array<double, 11> kBumpHeight = {4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
constexpr std::array<double, 11> kBumpWidth = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                               0.01,  0.01,  0.005, 0.008, 0.005};

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

constexpr std::array<std::pair<SignalName, const char*>, 6> kNames = {{{SignalName::blocks, "blocks"},
                                                                      {SignalName::bumps, "bumps"},
                                                                      {SignalName::doppler, "doppler"},
                                                                      {SignalName::heavisine, "heavisine"},
                                                                      {SignalName::spike, "spike"},
                                                                      {SignalName::critical, "critical"}}};

}  // namespace

double blocks(double x) {
  double s = 0.0;
  for (std::size_t i = 0; i < kPos.size(); ++i) s += kBlockHeight[i] * (1.0 + sgn(x - kPos[i])) / 2.0;
  return s;
}

double bumps(double x) {
  double s = 0.0;
  for (std::size_t i = 0; i < kPos.size(); ++i) s += kBumpHeight[i] * std::pow(1.0 + std::fabs((x - kPos[i]) / kBumpWidth[i]), -4.0);
  return s;
}

double doppler(double x) {
  return std::sqrt(x * (1.0 - x)) * std::sin(2.0 * std::numbers::pi * 1.05 / (x + 0.05));
}

double heavisine(double x) {
  return 4.0 * std::sin(4.0 * std::numbers::pi * x) - sgn(x - 0.3) - sgn(0.72 - x);
}

std::string to_string(SignalName name) {
  for (const auto& [id, text] : kNames)
    if (id == name) return text;
  return "unknown";
}

SignalName parse_signal_name(const std::string& text) {
  for (const auto& [id, name] : kNames)
    if (text == name) return id;
  throw InputError("unknown signal '" + text + "'; valid: blocks, bumps, doppler, heavisine, spike, critical");
}

Signal test_signal(SignalName name, std::size_t n, const SignalParams& params) {
  const int J = dyadic_level(n);
  const FilterBank& bank = params.bank ? *params.bank : filter_bank(WaveletFamily::coiflet, 3);
  const double sn = std::sqrt(static_cast<double>(n));

  if (name == SignalName::spike || name == SignalName::critical) {
    WaveletCoefficients c = WaveletCoefficients::zeros(0, J);
    if (name == SignalName::spike) {
      if (params.spike_level < 0 || params.spike_level >= J)
        throw InputError("spike level must lie in [0, " + std::to_string(J - 1) + "]");
      c.level(params.spike_level)[0] = sn * params.amplitude * std::exp2(-params.spike_level * params.r);
    } else {
      for (int j = 0; j < J; ++j)
        for (double& v : c.level(j)) v = sn * params.critical_c * std::exp2(-j * (params.r + 0.5));
    }
    return idwt(c, bank);
  }

  double (*f)(double) = nullptr;
  switch (name) {
    case SignalName::blocks: f = blocks; break;
    case SignalName::bumps: f = bumps; break;
    case SignalName::doppler: f = doppler; break;
    case SignalName::heavisine: f = heavisine; break;
    default: break;
  }
  Signal out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(static_cast<double>(i + 1) / static_cast<double>(n));
  if (params.rescale && n > 1) {
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : out) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd > 0.0)
      for (double& v : out) v /= sd;
  }
  return out;
}

}  // namespace wshrink

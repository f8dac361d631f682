#pragma once

#include <string>

#include "wshrink/wavelet.hpp"

namespace wshrink {

enum class SignalName { blocks, bumps, doppler, heavisine, spike, critical };

std::string to_string(SignalName name);
/// InputError listing the valid names.
SignalName parse_signal_name(const std::string& text);

struct SignalParams {
  // blocks/bumps/doppler/heavisine: rescale to unit sample standard deviation.
  bool rescale = true;
  double r = 1.0;          // spike and critical
  int spike_level = 3;     // i0
  double amplitude = 1.0;  // spike amplitude
  double critical_c = 1.0;
  const FilterBank* bank = nullptr;  // spike/critical synthesis; coiflet 3 when null
};

/// Closed-form test function at x_i = i/n, i = 1..n (standard Donoho-Johnstone
/// definitions), or a signal synthesised from coefficients:
///   spike:    theta_{i0,0} = amplitude 2^(-i0 r), all else 0;
///   critical: theta_{jk} = c 2^(-j(r+1/2)) for every j = 0..J-1 and k.
/// Synthesised signals are idwt(sqrt(n) theta) with coarse level 0 and are
/// never rescaled.
Signal test_signal(SignalName name, std::size_t n, const SignalParams& params = {});

/// The function values without the unit-variance rescaling.
double blocks(double x);
double bumps(double x);
double doppler(double x);
double heavisine(double x);

}  // namespace wshrink

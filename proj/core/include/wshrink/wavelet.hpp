#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wshrink {

using Signal = std::vector<double>;

enum class WaveletFamily { haar, daubechies, coiflet };

std::string to_string(WaveletFamily family);
WaveletFamily parse_wavelet_family(const std::string& name);

/// Orthonormal two-channel filter pair.
///
/// `lowpass` sums to sqrt(2), has unit energy and is orthogonal to its even
/// shifts; `highpass[k] = (-1)^k lowpass[N-1-k]`.
struct FilterBank {
  WaveletFamily family = WaveletFamily::haar;
  int order = 1;
  std::vector<double> lowpass;
  std::vector<double> highpass;
  int vanishing_moments = 1;

  std::size_t support_length() const { return lowpass.size(); }
  std::string name() const;
};

/// Builds and validates a filter bank.
///
/// Supported: haar (order 1), daubechies with 1..10 vanishing moments
/// (2..20 taps, order 1 is Haar), coiflet 1..5 (6..30 taps, 2*order
/// vanishing moments). Daubechies filters are obtained by spectral
/// factorisation of the Daubechies polynomial; coiflet filters come from
/// the published tables. Every bank is checked against the orthonormality,
/// DC-gain and moment conditions before it is returned.
///
/// Throws ConfigError for an unsupported family/order.
FilterBank build_filter_bank(WaveletFamily family, int order);

/// Process-wide cache over build_filter_bank. Thread-safe.
const FilterBank& filter_bank(WaveletFamily family, int order);

/// Largest deviation from the orthonormality / DC-gain / QMF conditions.
double filter_bank_defect(const FilterBank& bank);

/// Scaling coefficients at `coarse_level` plus detail bands for
/// levels coarse_level..fine_level-1. Level j holds 2^j entries.
struct WaveletCoefficients {
  int coarse_level = 0;
  int fine_level = 0;
  std::vector<double> scaling;
  std::vector<std::vector<double>> details;  // details[j - coarse_level]

  static WaveletCoefficients zeros(int coarse_level, int fine_level);

  std::size_t size() const;  // 2^fine_level when consistent
  std::vector<double>& level(int j) { return details.at(static_cast<std::size_t>(j - coarse_level)); }
  const std::vector<double>& level(int j) const {
    return details.at(static_cast<std::size_t>(j - coarse_level));
  }
  double squared_norm() const;
  void validate() const;  // throws InputError on inconsistent structure
};

/// log2(n) for an exact power of two, otherwise InputError.
int dyadic_level(std::size_t n);

/// Periodised orthonormal DWT down to `coarse_level`.
WaveletCoefficients dwt(std::span<const double> signal, int coarse_level, const FilterBank& bank);

/// Inverse of dwt().
Signal idwt(const WaveletCoefficients& coeffs, const FilterBank& bank);

}  // namespace wshrink

#pragma once

#include <string>

#include "wshrink/density.hpp"

namespace wshrink {

/// Posterior-mean rule for one wavelet coefficient under a spike-and-slab
/// prior: point mass at zero with odds `beta`, slab density nu*xi(nu*theta),
/// and observation d = theta + eps/sqrt(n) with eps ~ error.
struct ShrinkageRule {
  DensityModel prior = DensityModel::normal();
  DensityModel error = DensityModel::normal();
  double nu = 1.0;
  double beta = 1.0;  // may be +inf
  double n = 1.0;
  // Skip the conjugate closed form for the normal/normal pair.
  bool force_quadrature = false;

  void validate() const;  // DomainError on nu <= 0, beta < 0 / NaN, n <= 0
  bool closed_form() const;
};

/// I0 = i0 * exp(log_scale), I1 = i1 * exp(log_scale).
struct IntegralPair {
  double i0 = 0.0;
  double i1 = 0.0;
  double log_scale = 0.0;
  // I1/I0, evaluated through whichever representation is better
  // conditioned. Always satisfies 0 <= ratio*sign(d) <= |d|.
  double ratio = 0.0;

  double log_i0() const;
};

IntegralPair integrals(const ShrinkageRule& rule, double d);

/// theta_hat = I1 / (I0 + beta*sqrt(n)*eta(sqrt(n) d)).
double shrink(const ShrinkageRule& rule, double d);

/// theta_hat together with the integrals it was derived from.
struct ShrinkResult {
  double theta = 0.0;
  double ratio = 0.0;         // I1/I0
  double log_bayes_factor = 0.0;  // log(beta*sqrt(n)*eta(sqrt(n) d) / I0)
};
ShrinkResult shrink_detailed(const ShrinkageRule& rule, double d);

enum class ExpansionRegime { small_nu, large_nu };
std::string to_string(ExpansionRegime regime);

/// Comparison of I1/I0 with its leading-order asymptotic form.
///
/// small_nu (nu/sqrt(n) <= 0.1): predicted = d + E2[eta] (nu/n) xi'(nu d)/xi(nu d),
///   deviation = |ratio - d|.
/// large_nu (sqrt(n)/nu <= 0.1): predicted = -E2[xi] (sqrt(n)/nu^2) eta'(sqrt(n) d)/eta(sqrt(n) d),
///   deviation = |ratio|. predicted is infinite when xi has no second moment.
struct ExpansionReport {
  ExpansionRegime regime = ExpansionRegime::small_nu;
  double ratio = 0.0;
  double predicted = 0.0;
  double deviation = 0.0;
  double residual = 0.0;  // |ratio - predicted|
};

/// Requires both densities heavy-tailed (lambda == 0) or both normal.
/// DomainError when neither regime applies (nu comparable to sqrt(n)).
ExpansionReport expansion_check(const ShrinkageRule& rule, double d);

}  // namespace wshrink

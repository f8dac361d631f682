#include "wshrink/posterior.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wshrink/errors.hpp"
#include "wshrink/quadrature.hpp"

namespace wshrink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Characteristic widths of a density, used for panel seeding. A mixture
// contributes both its normal core and its heavy component.
std::vector<double> widths_of(const DensityModel& m) {
  std::vector<double> w{m.width()};
  if (m.family() == DensityFamily::normal_heavy_mixture) {
    w.push_back(m.scale());
    w.push_back(m.component().width());
  }
  return w;
}

// log(1 - exp(x)) for x <= 0.
double log1mexp(double x) {
  if (x == 0.0) return -kInf;
  return x > -std::numbers::ln2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

struct Peak {
  double value;
  double x;
};

// Maximum of `logf` over [lo, hi]: coarse scan, then golden-section
// refinement around the best sample.
template <class F>
Peak log_peak(F&& logf, double lo, double hi) {
  constexpr int kScan = 33;
  double best = -kInf;
  double best_x = lo;
  for (int i = 0; i < kScan; ++i) {
    const double x = lo + (hi - lo) * i / (kScan - 1);
    const double v = logf(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double step = (hi - lo) / (kScan - 1);
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = logf(x1), f2 = logf(x2);
  for (int it = 0; it < 60 && b - a > 1e-14 * (1.0 + std::fabs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = logf(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = logf(x1);
    }
  }
  if (f1 >= best && f1 >= f2) return {f1, x1};
  if (f2 >= best) return {f2, x2};
  return {best, best_x};
}

// Integrates exp(logf_k(x) - S) over [0, inf) for k < K, where the
// integrand is a product of a factor peaked at 0 and one peaked at `c`.
// S is the peak of component 0. Returns values and S.
template <std::size_t K, class F>
std::pair<quadrature::Result<K>, double> integrate_two_mode(F&& logf, double c, const std::vector<double>& w0,
                                                            const std::vector<double>& wc) {
  auto first = [&](double x) { return logf(x)[0]; };
  double wmax = 0.0, wmin = kInf;
  for (double w : w0) wmax = std::max(wmax, w), wmin = std::min(wmin, w);
  for (double w : wc) wmax = std::max(wmax, w), wmin = std::min(wmin, w);

  const double T = std::max(c + 64.0 * wmax, 64.0 * wmax);
  const Peak peak = log_peak(first, 0.0, std::max(c, 1e-300));
  const double S = std::max({peak.value, first(0.0), first(c)});
  if (!std::isfinite(S)) throw NumericError("posterior integrand vanishes at both modes", kInf);

  std::vector<double> edges{0.0, c, T};
  for (double w : w0)
    for (double k : {0.5, 2.0, 8.0, 32.0}) edges.push_back(k * w);
  for (double w : wc)
    for (double k : {0.5, 2.0, 8.0, 32.0}) {
      edges.push_back(c - k * w);
      edges.push_back(c + k * w);
    }
  // Between the modes the product can be far narrower than either factor;
  // seed panels on the scale given by the curvature at its peak.
  const double h = 0.01 * wmin;
  if (peak.x - h > 0.0 && peak.x + h < c) {
    const double curv = (first(peak.x + h) - 2.0 * peak.value + first(peak.x - h)) / (h * h);
    const double wp = curv < 0.0 ? 1.0 / std::sqrt(-curv) : wmin;
    if (std::isfinite(wp) && wp > 0.0) {
      edges.push_back(peak.x);
      for (double k : {0.5, 2.0, 8.0, 32.0}) {
        edges.push_back(peak.x - k * wp);
        edges.push_back(peak.x + k * wp);
      }
    }
  }
  std::erase_if(edges, [&](double e) { return !(e >= 0.0 && e <= T); });
  for (double u : {0.5, 0.75, 0.875, 0.9375, 0.96875}) edges.push_back(T + u);
  edges.push_back(T + 1.0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // x in [0, T] maps to itself; x = T + u, u in [0, 1), to T + s u/(1-u).
  const double s = T;
  auto integrand = [&](double x, std::array<double, K>& out) {
    double y = x, log_jac = 0.0;
    if (x > T) {
      const double u = x - T;
      y = T + s * u / (1.0 - u);
      log_jac = std::log(s) - 2.0 * std::log1p(-u);
    }
    const std::array<double, K> l = logf(y);
    for (std::size_t k = 0; k < K; ++k) out[k] = std::exp(l[k] + log_jac - S);
  };

  quadrature::Options opt;
  opt.abs_tol = 1e-12 * wmin;
  opt.rel_tol = 1e-8;
  opt.max_panels = 4000;
  return {quadrature::integrate<K>(integrand, edges, opt), S};
}

IntegralPair closed_form_integrals(const ShrinkageRule& rule, double d) {
  // xi = N(0, s1^2), eta = N(0, s0^2): the slab is N(0, s1^2/nu^2) and the
  // observation noise N(0, s0^2/n).
  const double s1 = rule.prior.scale(), s0 = rule.error.scale();
  const double var = s0 * s0 / rule.n + s1 * s1 / (rule.nu * rule.nu);
  IntegralPair p;
  p.log_scale = -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * d * d / var;
  p.i0 = 1.0;
  p.ratio = d * rule.n * s1 * s1 / (rule.n * s1 * s1 + rule.nu * rule.nu * s0 * s0);
  p.i1 = p.ratio;
  return p;
}

// Folded integrals for d >= 0 in y = nu * x.
IntegralPair quadrature_integrals(const ShrinkageRule& rule, double d) {
  const DensityModel& xi = rule.prior;
  const DensityModel& eta = rule.error;
  const double nu = rule.nu;
  const double sn = std::sqrt(rule.n);
  const double lsn = 0.5 * std::log(rule.n);

  auto direct = [&](double y) {
    const double a = eta.log_pdf(sn * (y / nu - d));
    const double lx = xi.log_pdf(y);
    const double base = lsn + lx + a;
    const double diff = std::min(eta.log_pdf_diff(sn * y / nu, sn * d), 0.0);
    std::array<double, 2> out;
    out[0] = base + std::log1p(std::exp(diff));
    out[1] = y > 0.0 ? base + log1mexp(diff) + std::log(y / nu) : -kInf;
    return out;
  };

  std::vector<double> wxi = widths_of(xi), weta = widths_of(eta);
  for (double& w : weta) w *= nu / sn;

  auto [res, S] = integrate_two_mode<2>(direct, nu * d, wxi, weta);
  IntegralPair p;
  p.log_scale = S;
  p.i0 = res.value[0];
  p.i1 = d > 0.0 ? res.value[1] : 0.0;
  if (!(p.i0 > 0.0)) throw NumericError("I0 evaluated to a nonpositive value", res.error[0]);

  double ratio = p.i1 / p.i0;
  if (d > 0.0 && ratio > 0.5 * d) {
    // Near the identity the direct ratio loses relative accuracy in d - ratio;
    // evaluate d*I0 - I1 = int z sqrt(n) eta(sqrt(n) z) nu [xi(nu(d-z)) - xi(nu(d+z))] dz
    // with t = sqrt(n) z instead.
    const double lnu = std::log(nu);
    auto gap = [&](double t) {
      const double z = t / sn;
      const double a = xi.log_pdf(nu * (d - z));
      const double diff = std::min(xi.log_pdf_diff(nu * d, nu * z), 0.0);
      std::array<double, 1> out;
      out[0] = t > 0.0 ? std::log(z) + eta.log_pdf(t) + lnu + a + log1mexp(diff) : -kInf;
      return out;
    };
    std::vector<double> wt = widths_of(eta), wx = widths_of(xi);
    for (double& w : wx) w *= sn / nu;
    auto [kres, SK] = integrate_two_mode<1>(gap, sn * d, wt, wx);
    // K is in true units exp(SK) * k; I0 = exp(S) * i0.
    const double k_over_i0 = kres.value[0] / p.i0 * std::exp(SK - S);
    ratio = d - k_over_i0;
  }
  const double slack = 1e-6 * d;
  if (ratio < -slack || ratio > d + slack)
    throw NumericError("posterior ratio escaped [0, d]; quadrature is inaccurate", std::fabs(ratio));
  p.ratio = std::clamp(ratio, 0.0, d);
  p.i1 = p.ratio * p.i0;
  return p;
}

}  // namespace

void ShrinkageRule::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("shrinkage rule requires finite nu > 0");
  if (!(beta >= 0.0)) throw DomainError("shrinkage rule requires beta >= 0");
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("shrinkage rule requires n > 0");
}

bool ShrinkageRule::closed_form() const {
  return !force_quadrature && prior.family() == DensityFamily::normal && error.family() == DensityFamily::normal;
}

double IntegralPair::log_i0() const { return std::log(i0) + log_scale; }

IntegralPair integrals(const ShrinkageRule& rule, double d) {
  rule.validate();
  if (!std::isfinite(d)) throw DomainError("coefficient must be finite");
  const double a = std::fabs(d);
  IntegralPair p = rule.closed_form() ? closed_form_integrals(rule, a) : quadrature_integrals(rule, a);
  if (d < 0.0) {
    p.i1 = -p.i1;
    p.ratio = -p.ratio;
  }
  return p;
}

ShrinkResult shrink_detailed(const ShrinkageRule& rule, double d) {
  rule.validate();
  ShrinkResult r;
  if (std::isinf(rule.beta)) {
    r.log_bayes_factor = kInf;
    return r;
  }
  if (d == 0.0) return r;
  const IntegralPair p = integrals(rule, d);
  r.ratio = p.ratio;
  if (rule.beta == 0.0) {
    r.log_bayes_factor = -kInf;
    r.theta = p.ratio;
    return r;
  }
  r.log_bayes_factor =
      std::log(rule.beta) + 0.5 * std::log(rule.n) + rule.error.log_pdf(std::sqrt(rule.n) * d) - p.log_i0();
  // ratio / (1 + exp(z)) without overflow.
  const double z = r.log_bayes_factor;
  r.theta = z > 0.0 ? p.ratio * std::exp(-z) / (1.0 + std::exp(-z)) : p.ratio / (1.0 + std::exp(z));
  return r;
}

double shrink(const ShrinkageRule& rule, double d) { return shrink_detailed(rule, d).theta; }

std::string to_string(ExpansionRegime regime) {
  return regime == ExpansionRegime::small_nu ? "small_nu" : "large_nu";
}

ExpansionReport expansion_check(const ShrinkageRule& rule, double d) {
  rule.validate();
  const bool xi_heavy = rule.prior.tail_meta().lambda == 0.0;
  const bool eta_heavy = rule.error.tail_meta().lambda == 0.0;
  const bool both_normal =
      rule.prior.family() == DensityFamily::normal && rule.error.family() == DensityFamily::normal;
  if (!(xi_heavy && eta_heavy) && !both_normal)
    throw DomainError("expansion_check needs two heavy-tailed densities or two normal densities");

  const double sn = std::sqrt(rule.n);
  ExpansionReport rep;
  rep.ratio = integrals(rule, d).ratio;
  if (rule.nu / sn <= 0.1) {
    rep.regime = ExpansionRegime::small_nu;
    rep.predicted = d + rule.error.second_moment() * (rule.nu / rule.n) * rule.prior.log_pdf_derivative(rule.nu * d);
    rep.deviation = std::fabs(rep.ratio - d);
  } else if (sn / rule.nu <= 0.1) {
    rep.regime = ExpansionRegime::large_nu;
    const double m2 = rule.prior.second_moment();
    const double slope = rule.error.log_pdf_derivative(sn * d);
    rep.predicted = std::isinf(m2) ? (slope == 0.0 ? 0.0 : -std::copysign(kInf, slope))
                                   : -m2 * (sn / (rule.nu * rule.nu)) * slope;
    rep.deviation = std::fabs(rep.ratio);
  } else {
    throw DomainError("no expansion regime applies: nu/sqrt(n) = " + std::to_string(rule.nu / sn) +
                      " (need <= 0.1 or >= 10)");
  }
  rep.residual = std::fabs(rep.ratio - rep.predicted);
  return rep;
}

}  // namespace wshrink

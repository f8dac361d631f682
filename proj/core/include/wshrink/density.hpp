#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace wshrink {

enum class DensityFamily { normal, double_exponential, student_t, cauchy, normal_heavy_mixture };

std::string to_string(DensityFamily family);

/// Tail classification used by the regularity conditions and schedules.
///
/// `lambda` is the growth exponent of |f'/f| (0 for heavy tails, 1 for the
/// normal). `delta` is the exponent for which |x|^(2+delta) f(x) is
/// eventually nonincreasing. `gamma` and `descent_nu` describe the bound
/// f(x) <= C (x^2+1)^(-descent_nu/2) exp(-c |x|^gamma).
struct TailMeta {
  double lambda = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double descent_nu = 1.0;
};

/// Symmetric unimodal density. Immutable; copies share the mixture
/// component.
class DensityModel {
public:
  static DensityModel normal(double sigma = 1.0);
  static DensityModel double_exponential(double scale = 1.0);
  static DensityModel student_t(double df, double scale = 1.0);
  static DensityModel cauchy(double scale = 1.0);
  /// (1 - weight) N(0, sigma0^2) + weight * component. The component must
  /// be heavy-tailed (lambda == 0).
  static DensityModel normal_heavy_mixture(double sigma0, double weight, const DensityModel& component);

  /// Same family with the scale chosen so that the variance equals
  /// sigma^2. Cauchy and t with df <= 2 have no variance; they get
  /// scale = sigma.
  static DensityModel with_std(DensityFamily family, double sigma, double df = 5.0);

  DensityFamily family() const { return family_; }
  double scale() const { return scale_; }
  double df() const { return df_; }
  double mixture_weight() const { return weight_; }
  const DensityModel& component() const;
  const TailMeta& tail_meta() const { return tail_; }

  double pdf(double x) const;
  /// Computed without forming pdf first; finite far into the tails.
  double log_pdf(double x) const;
  /// d/dx log pdf(x).
  double log_pdf_derivative(double x) const;
  /// log pdf(m + h) - log pdf(m - h) without cancellation for small h.
  double log_pdf_diff(double m, double h) const;

  /// Second moment, +inf when it does not exist.
  double second_moment() const;
  /// Whether integral |x|^a pdf(x) dx is finite.
  bool has_absolute_moment(double a) const;

  /// Characteristic width used to place quadrature panels.
  double width() const;

  double sample(std::mt19937_64& rng) const;

  /// The model with its density rescaled by `factor` (x -> x / factor).
  DensityModel scaled(double factor) const;

  std::string describe() const;

private:
  DensityModel() = default;
  void assign_tail_meta();

  DensityFamily family_ = DensityFamily::normal;
  double scale_ = 1.0;
  double df_ = 0.0;
  double weight_ = 0.0;
  double log_norm_ = 0.0;  // family-specific normalising constant
  std::shared_ptr<const DensityModel> component_;
  TailMeta tail_;
};

/// Smallest x >= 0 with pdf(x) == y, by bisection on the positive axis.
/// Throws DomainError when y is not in (0, pdf(0)].
double pdf_inverse_positive(const DensityModel& model, double y);

/// Outcome of the numeric regularity diagnostics for an (prior, error)
/// pair. Diagnostic only.
struct ConditionReport {
  // (A3): sup eta/xi on a log-spaced grid.
  double ratio_sup = 0.0;
  double ratio_tail_growth = 0.0;  // log-ratio increase over the last decade
  bool a3_pass = false;
  // (A4): x^(2+delta) eta(x) nonincreasing beyond C_delta = 1.
  double delta = 0.0;
  int a4_violations_beyond_c_delta = 0;
  double a4_empirical_c_delta = 0.0;  // last grid point where monotonicity fails
  bool a4_pass = false;
  // (A1)/(A2): fitted growth exponent of |f'/f| on the tail of the grid.
  double lambda_xi_fit = 0.0;
  double lambda_eta_fit = 0.0;
  bool a1_bounded = false;  // |xi'/xi| bounded on the grid
  bool a2_bounded = false;  // |eta'/eta| bounded on the grid
};

ConditionReport check_regularity(const DensityModel& xi, const DensityModel& eta, double grid_max = 1000.0);

}  // namespace wshrink

#include "wshrink/wavelet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "wshrink/errors.hpp"

namespace wshrink {

namespace {

// Published coiflet scaling filters (coif1..coif5), synthesis ordering.
constexpr std::array<double, 6> kCoif1 = {
    -0.07273261951252645, 0.3378976624574818, 0.8525720202116004,
    0.3848648468648578,   -0.07273261951252645, -0.015655728135791993};
constexpr std::array<double, 12> kCoif2 = {
    0.01638733646320364,   -0.04146493678687178, -0.0673725547237256,
    0.3861100668227629,    0.8127236354494135,   0.4170051844232391,
    -0.07648859907828076,  -0.05943441864643109, 0.02368017194684777,
    0.005611434819368834,  -0.0018232088709110323, -0.000720549445520347};
constexpr std::array<double, 18> kCoif3 = {
    -0.003793512864380802,  0.007782596425672746,  0.023452696142077168,
    -0.06577191128146936,   -0.06112339000297255,  0.40517690240911824,
    0.7937772226260872,     0.42848347637737,      -0.07179982161915484,
    -0.08230192710629983,   0.03455502757329774,   0.015880544863669452,
    -0.009007976136730624,  -0.0025745176881367972, 0.0011175187708306303,
    0.0004662169598204029,  -7.0983302506379e-05,  -3.459977319727278e-05};
constexpr std::array<double, 24> kCoif4 = {
    0.000892313902537003,   -0.001629492425226786,  -0.007346167936268051,
    0.01606894713157503,    0.02668230466960483,    -0.08126671024919373,
    -0.05607731960356926,   0.41530842700068227,    0.7822389344242826,
    0.43438603311435653,    -0.06662747236681717,   -0.09622042453595264,
    0.03933442260558915,    0.02508225333794961,    -0.015211728187697211,
    -0.0056582838001308835, 0.0037514346971460866,  0.0012665610789256603,
    -0.0005890202246332165, -0.0002599743371222568, 6.233885431278719e-05,
    3.1229861599195265e-05, -3.259647940030751e-06, -1.7849909144933469e-06};
constexpr std::array<double, 30> kCoif5 = {
    -0.000212081862067494,  0.0003585777411617577,  0.0021782943778456947,
    -0.00415931262757864,   -0.010131584846900276,  0.023408322118927783,
    0.028169744270532353,   -0.09192158806008609,   -0.052046670253554764,
    0.42157126673075435,    0.7742936228603274,     0.4379823066591634,
    -0.06203775157498196,   -0.10556315130733723,   0.041287530472117834,
    0.032674799467057355,   -0.019758391600965465,  -0.009159507338676163,
    0.006761520220620417,   0.0024315754425382886,  -0.0016616273039298788,
    -0.0006375589261258812, 0.0003018579416682448,  0.00014035632812373243,
    -4.12198619242655e-05,  -2.1270221672515614e-05, 3.7007277113394796e-06,
    2.0612203985788783e-06, -1.6237995172048338e-07, -9.604010112767894e-08};

using cld = std::complex<long double>;

cld eval_poly(const std::vector<long double>& coef, cld z) {
  cld acc = 0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cld eval_poly_derivative(const std::vector<long double>& coef, cld z) {
  cld acc = 0;
  for (std::size_t k = coef.size(); k-- > 1;) acc = acc * z + static_cast<long double>(k) * coef[k];
  return acc;
}

// Minimum-phase Daubechies lowpass with `moments` vanishing moments.
std::vector<double> daubechies_lowpass(int moments) {
  const int m = moments;
  // P(y) = sum_{k<m} C(m-1+k, k) y^k, the polynomial whose roots seed the
  // spectral factor.
  std::vector<long double> p(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    long double c = 1;
    for (int i = 1; i <= k; ++i) c = c * (m - 1 + i) / i;
    p[static_cast<std::size_t>(k)] = c;
  }

  std::vector<cld> y_roots;
  const int degree = m - 1;
  if (degree > 0) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    const double lead = static_cast<double>(p.back());
    for (int i = 0; i < degree; ++i) companion(0, i) = -static_cast<double>(p[degree - 1 - i]) / lead;
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    for (int i = 0; i < degree; ++i) {
      cld root(solver.eigenvalues()[i].real(), solver.eigenvalues()[i].imag());
      for (int it = 0; it < 50; ++it) {
        cld step = eval_poly(p, root) / eval_poly_derivative(p, root);
        root -= step;
        if (std::abs(step) < 1e-30L * (1 + std::abs(root))) break;
      }
      y_roots.push_back(root);
    }
  }

  // (1 + z)^m * prod (z - z_i), z_i the root inside the unit circle of
  // z^2 - (2 - 4y) z + 1 = 0.
  std::vector<cld> poly{cld(1)};
  auto multiply_linear = [&poly](cld root) {
    std::vector<cld> next(poly.size() + 1, cld(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= root * poly[i];
    }
    poly = std::move(next);
  };
  for (int i = 0; i < m; ++i) multiply_linear(cld(-1));
  for (const cld& y : y_roots) {
    const cld b = cld(2) - cld(4) * y;
    const cld disc = std::sqrt(b * b - cld(4));
    cld z1 = (b + disc) / cld(2);
    cld z2 = (b - disc) / cld(2);
    multiply_linear(std::abs(z1) < std::abs(z2) ? z1 : z2);
  }

  long double sum = 0;
  for (const cld& c : poly) sum += c.real();
  const long double scale = std::sqrt(2.0L) / sum;
  std::vector<double> h(poly.size());
  for (std::size_t k = 0; k < poly.size(); ++k) h[poly.size() - 1 - k] = static_cast<double>(poly[k].real() * scale);
  return h;
}

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
  const std::size_t n = h.size();
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * h[n - 1 - k];
  return g;
}

// Largest relative defect of sum_k g_k (k - c)^m = 0 for m < moments.
double moment_defect(const std::vector<double>& g, int moments) {
  const double center = 0.5 * static_cast<double>(g.size() - 1);
  double worst = 0.0;
  for (int m = 0; m < moments; ++m) {
    long double acc = 0, mag = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const long double t = std::pow(static_cast<long double>(k) - center, m) * g[k];
      acc += t;
      mag += std::fabs(t);
    }
    worst = std::max(worst, static_cast<double>(std::fabs(acc) / mag));
  }
  return worst;
}

std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

}  // namespace

std::string to_string(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::haar: return "haar";
    case WaveletFamily::daubechies: return "daubechies";
    case WaveletFamily::coiflet: return "coiflet";
  }
  return "unknown";
}

WaveletFamily parse_wavelet_family(const std::string& name) {
  if (name == "haar") return WaveletFamily::haar;
  if (name == "daubechies" || name == "db") return WaveletFamily::daubechies;
  if (name == "coiflet" || name == "coif") return WaveletFamily::coiflet;
  throw ConfigError("unknown wavelet family '" + name + "' (valid: haar, daubechies, coiflet)");
}

std::string FilterBank::name() const { return to_string(family) + std::to_string(order); }

double filter_bank_defect(const FilterBank& bank) {
  const auto& h = bank.lowpass;
  const auto& g = bank.highpass;
  const std::size_t n = h.size();
  double worst = std::fabs(std::accumulate(h.begin(), h.end(), 0.0) - std::sqrt(2.0));
  for (std::size_t shift = 0; shift < n; shift += 2) {
    double acc = 0.0;
    for (std::size_t k = 0; k + shift < n; ++k) acc += h[k] * h[k + shift];
    worst = std::max(worst, std::fabs(acc - (shift == 0 ? 1.0 : 0.0)));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = ((k % 2 == 0) ? 1.0 : -1.0) * h[n - 1 - k];
    worst = std::max(worst, std::fabs(g[k] - expected));
  }
  return worst;
}

FilterBank build_filter_bank(WaveletFamily family, int order) {
  FilterBank bank;
  bank.family = family;
  bank.order = order;
  switch (family) {
    case WaveletFamily::haar:
      if (order != 1) throw ConfigError("haar supports order 1 only");
      bank.lowpass = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
      bank.vanishing_moments = 1;
      break;
    case WaveletFamily::daubechies:
      if (order < 1 || order > 10)
        throw ConfigError("daubechies order must be 1..10 vanishing moments, got " + std::to_string(order));
      bank.lowpass = daubechies_lowpass(order);
      bank.vanishing_moments = order;
      break;
    case WaveletFamily::coiflet: {
      switch (order) {
        case 1: bank.lowpass.assign(kCoif1.begin(), kCoif1.end()); break;
        case 2: bank.lowpass.assign(kCoif2.begin(), kCoif2.end()); break;
        case 3: bank.lowpass.assign(kCoif3.begin(), kCoif3.end()); break;
        case 4: bank.lowpass.assign(kCoif4.begin(), kCoif4.end()); break;
        case 5: bank.lowpass.assign(kCoif5.begin(), kCoif5.end()); break;
        default:
          throw ConfigError("coiflet order must be 1..5, got " + std::to_string(order));
      }
      bank.vanishing_moments = 2 * order;
      break;
    }
  }
  bank.highpass = quadrature_mirror(bank.lowpass);

  const double defect = filter_bank_defect(bank);
  if (defect > 1e-12)
    throw NumericError("filter bank " + bank.name() + " fails orthonormality check", defect);
  const double moments = moment_defect(bank.highpass, bank.vanishing_moments);
  if (moments > 1e-9)
    throw NumericError("filter bank " + bank.name() + " fails vanishing-moment check", moments);
  return bank;
}

const FilterBank& filter_bank(WaveletFamily family, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, FilterBank> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(static_cast<int>(family), order);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_filter_bank(family, order)).first;
  return it->second;
}

WaveletCoefficients WaveletCoefficients::zeros(int coarse_level, int fine_level) {
  if (coarse_level < 0 || fine_level <= coarse_level)
    throw InputError("need 0 <= coarse_level < fine_level");
  WaveletCoefficients c;
  c.coarse_level = coarse_level;
  c.fine_level = fine_level;
  c.scaling.assign(std::size_t{1} << coarse_level, 0.0);
  for (int j = coarse_level; j < fine_level; ++j) c.details.emplace_back(std::size_t{1} << j, 0.0);
  return c;
}

std::size_t WaveletCoefficients::size() const {
  std::size_t total = scaling.size();
  for (const auto& d : details) total += d.size();
  return total;
}

double WaveletCoefficients::squared_norm() const {
  double acc = 0.0;
  for (double v : scaling) acc += v * v;
  for (const auto& d : details)
    for (double v : d) acc += v * v;
  return acc;
}

void WaveletCoefficients::validate() const {
  if (coarse_level < 0 || fine_level <= coarse_level)
    throw InputError("wavelet coefficients: need 0 <= coarse_level < fine_level");
  if (scaling.size() != (std::size_t{1} << coarse_level))
    throw InputError("wavelet coefficients: scaling band must hold 2^coarse_level entries");
  if (details.size() != static_cast<std::size_t>(fine_level - coarse_level))
    throw InputError("wavelet coefficients: expected one detail band per level");
  for (int j = coarse_level; j < fine_level; ++j) {
    if (level(j).size() != (std::size_t{1} << j))
      throw InputError("wavelet coefficients: detail level " + std::to_string(j) + " must hold 2^" +
                       std::to_string(j) + " entries");
  }
}

int dyadic_level(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw InputError("signal length " + std::to_string(n) + " is not a power of two");
  int level = 0;
  while ((std::size_t{1} << level) < n) ++level;
  return level;
}

WaveletCoefficients dwt(std::span<const double> signal, int coarse_level, const FilterBank& bank) {
  const int fine = dyadic_level(signal.size());
  if (coarse_level < 0 || coarse_level >= fine)
    throw InputError("coarse level " + std::to_string(coarse_level) + " must lie in [0, " +
                     std::to_string(fine) + ")");

  WaveletCoefficients out;
  out.coarse_level = coarse_level;
  out.fine_level = fine;
  out.details.resize(static_cast<std::size_t>(fine - coarse_level));

  const auto& h = bank.lowpass;
  const auto& g = bank.highpass;
  std::vector<double> approx(signal.begin(), signal.end());
  std::vector<double> next;
  for (int j = fine - 1; j >= coarse_level; --j) {
    const std::size_t len = approx.size();
    const std::size_t half = len / 2;
    next.assign(half, 0.0);
    auto& detail = out.level(j);
    detail.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      double a = 0.0, d = 0.0;
      for (std::size_t m = 0; m < h.size(); ++m) {
        const double v = approx[wrap(static_cast<std::ptrdiff_t>(2 * k + m), len)];
        a += h[m] * v;
        d += g[m] * v;
      }
      next[k] = a;
      detail[k] = d;
    }
    approx.swap(next);
  }
  out.scaling = std::move(approx);
  return out;
}

Signal idwt(const WaveletCoefficients& coeffs, const FilterBank& bank) {
  coeffs.validate();
  const auto& h = bank.lowpass;
  const auto& g = bank.highpass;
  std::vector<double> approx = coeffs.scaling;
  std::vector<double> next;
  for (int j = coeffs.coarse_level; j < coeffs.fine_level; ++j) {
    const auto& detail = coeffs.level(j);
    const std::size_t half = approx.size();
    const std::size_t len = 2 * half;
    next.assign(len, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      for (std::size_t m = 0; m < h.size(); ++m) {
        next[wrap(static_cast<std::ptrdiff_t>(2 * k + m), len)] += h[m] * approx[k] + g[m] * detail[k];
      }
    }
    approx.swap(next);
  }
  return approx;
}

}  // namespace wshrink

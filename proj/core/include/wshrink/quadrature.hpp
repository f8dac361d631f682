#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "wshrink/errors.hpp"

namespace wshrink::quadrature {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-8;
  int max_panels = 4000;
};

template <std::size_t K>
struct Result {
  std::array<double, K> value{};
  std::array<double, K> error{};
  int panels = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::array<double, K> value{};
  std::array<double, K> error{};
  double priority = 0.0;
};

template <std::size_t K, class F>
Panel<K> evaluate(F& f, double a, double b) {
  Panel<K> p;
  p.a = a;
  p.b = b;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, K> kronrod{}, gauss{}, lo{}, hi{};

  f(center, lo);
  for (std::size_t k = 0; k < K; ++k) {
    kronrod[k] = kKronrodWeights[7] * lo[k];
    gauss[k] = kGaussWeights[3] * lo[k];
  }
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    f(center - dx, lo);
    f(center + dx, hi);
    for (std::size_t k = 0; k < K; ++k) {
      const double s = lo[k] + hi[k];
      kronrod[k] += kKronrodWeights[i] * s;
      if (i % 2 == 1) gauss[k] += kGaussWeights[i / 2] * s;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    p.value[k] = kronrod[k] * half;
    p.error[k] = std::fabs((kronrod[k] - gauss[k]) * half);
  }
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of a K-vector valued
/// function over the union of the panels delimited by `edges` (sorted,
/// finite). `f(x, out)` writes K values. Panels are bisected in order of
/// largest scaled error until every component satisfies
/// error <= max(abs_tol, rel_tol * |value|).
///
/// Throws NumericError (carrying the achieved error) when max_panels is
/// reached first.
template <std::size_t K, class F>
Result<K> integrate(F&& f, std::span<const double> edges, const Options& options = {}) {
  using Panel = detail::Panel<K>;
  std::vector<Panel> heap;
  heap.reserve(static_cast<std::size_t>(options.max_panels) + 2);

  std::array<double, K> total{}, total_err{};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    Panel p = detail::evaluate<K>(f, edges[i], edges[i + 1]);
    for (std::size_t k = 0; k < K; ++k) {
      total[k] += p.value[k];
      total_err[k] += p.error[k];
    }
    heap.push_back(p);
  }

  std::array<double, K> weight{};
  auto rescale = [&] {
    for (std::size_t k = 0; k < K; ++k)
      weight[k] = 1.0 / std::max(options.abs_tol, options.rel_tol * std::fabs(total[k]));
  };
  auto priority = [&](const Panel& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k) s = std::max(s, p.error[k] * weight[k]);
    return s;
  };
  auto less = [](const Panel& x, const Panel& y) { return x.priority < y.priority; };
  auto converged = [&] {
    for (std::size_t k = 0; k < K; ++k)
      if (total_err[k] > std::max(options.abs_tol, options.rel_tol * std::fabs(total[k]))) return false;
    return true;
  };

  rescale();
  for (auto& p : heap) p.priority = priority(p);
  std::make_heap(heap.begin(), heap.end(), less);

  int iterations = 0;
  while (!converged()) {
    if (static_cast<int>(heap.size()) >= options.max_panels || heap.empty()) {
      double worst = 0.0;
      for (std::size_t k = 0; k < K; ++k) worst = std::max(worst, total_err[k]);
      throw NumericError("adaptive quadrature did not converge within " + std::to_string(options.max_panels) +
                             " panels",
                         worst);
    }
    std::pop_heap(heap.begin(), heap.end(), less);
    const Panel parent = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (parent.a + parent.b);
    if (!(mid > parent.a && mid < parent.b)) {
      // Panel cannot be split further in floating point; accept it.
      heap.push_back(parent);
      heap.back().priority = 0.0;
      std::push_heap(heap.begin(), heap.end(), less);
      double remaining = 0.0;
      for (const auto& p : heap) remaining = std::max(remaining, p.priority);
      if (remaining == 0.0) break;
      continue;
    }
    Panel left = detail::evaluate<K>(f, parent.a, mid);
    Panel right = detail::evaluate<K>(f, mid, parent.b);
    for (std::size_t k = 0; k < K; ++k) {
      total[k] += left.value[k] + right.value[k] - parent.value[k];
      total_err[k] += left.error[k] + right.error[k] - parent.error[k];
    }
    if (++iterations % 32 == 0) {
      rescale();
      for (auto& p : heap) p.priority = priority(p);
      std::make_heap(heap.begin(), heap.end(), less);
    }
    left.priority = priority(left);
    right.priority = priority(right);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), less);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), less);
  }

  // Re-sum from the panels to shed accumulated update rounding.
  Result<K> result;
  result.value = {};
  result.error = {};
  for (const auto& p : heap) {
    for (std::size_t k = 0; k < K; ++k) {
      result.value[k] += p.value[k];
      result.error[k] += p.error[k];
    }
  }
  result.panels = static_cast<int>(heap.size());
  return result;
}

}  // namespace wshrink::quadrature

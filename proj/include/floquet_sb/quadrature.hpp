#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace floquet_sb::quad {

template <std::size_t K>
using Values = std::array<double, K>;

template <std::size_t K>
struct Result {
  Values<K> value{};
  double error = 0.0;  // max over components of the accumulated |K15 - G7|
  int intervals = 0;
  bool converged = true;
};

namespace detail {

// Kronrod abscissae (positive half, descending) and weights; Gauss weights for the embedded 7-point rule.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Panel {
  double a, b;
  Values<K> value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <std::size_t K, class F>
Panel<K> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  Values<K> kron{}, gauss{};
  const Values<K> fc = f(c);
  for (std::size_t i = 0; i < K; ++i) {
    kron[i] = fc[i] * kWgk[7];
    gauss[i] = fc[i] * kWg[3];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = hw * kXgk[j];
    const Values<K> f1 = f(c - dx);
    const Values<K> f2 = f(c + dx);
    for (std::size_t i = 0; i < K; ++i) {
      kron[i] += kWgk[j] * (f1[i] + f2[i]);
      if (j % 2 == 1) gauss[i] += kWg[j / 2] * (f1[i] + f2[i]);
    }
  }
  Panel<K> p{a, b, {}, 0.0};
  for (std::size_t i = 0; i < K; ++i) {
    p.value[i] = kron[i] * hw;
    p.error = std::max(p.error, std::abs((kron[i] - gauss[i]) * hw));
  }
  return p;
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod integration of a vector-valued integrand on [a, b].
/// Bisects the panel with the largest error estimate until the summed estimate is below abs_tol.
template <std::size_t K, class F>
Result<K> integrate(F&& f, double a, double b, double abs_tol, int max_intervals = 4000) {
  using detail::Panel;
  Result<K> res;
  if (a == b) return res;
  std::priority_queue<Panel<K>> heap;
  heap.push(detail::gk15<K>(f, a, b));
  double total_err = heap.top().error;
  while (total_err > abs_tol && static_cast<int>(heap.size()) < max_intervals) {
    Panel<K> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at machine resolution
      heap.push(worst);
      break;
    }
    Panel<K> left = detail::gk15<K>(f, worst.a, mid);
    Panel<K> right = detail::gk15<K>(f, mid, worst.b);
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  res.intervals = static_cast<int>(heap.size());
  // Re-sum from scratch to avoid drift in the running error.
  total_err = 0.0;
  while (!heap.empty()) {
    const Panel<K>& p = heap.top();
    for (std::size_t i = 0; i < K; ++i) res.value[i] += p.value[i];
    total_err += p.error;
    heap.pop();
  }
  res.error = total_err;
  res.converged = total_err <= abs_tol;
  return res;
}

/// Integrates piecewise over consecutive breakpoints, sharing the tolerance evenly.
template <std::size_t K, class F>
Result<K> integrate_pieces(F&& f, std::span<const double> breakpoints, double abs_tol,
                           int max_intervals_per_piece = 4000) {
  Result<K> total;
  if (breakpoints.size() < 2) return total;
  const double piece_tol = abs_tol / static_cast<double>(breakpoints.size() - 1);
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const Result<K> r = integrate<K>(f, breakpoints[p], breakpoints[p + 1], piece_tol, max_intervals_per_piece);
    for (std::size_t i = 0; i < K; ++i) total.value[i] += r.value[i];
    total.error += r.error;
    total.intervals += r.intervals;
    total.converged = total.converged && r.converged;
  }
  total.converged = total.converged || total.error <= abs_tol;
  return total;
}

}  // namespace floquet_sb::quad

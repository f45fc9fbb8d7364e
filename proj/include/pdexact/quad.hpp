#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pdexact/jet.hpp"

namespace pdexact::quad {

struct QuadConfig {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  int max_subdivisions = 2000;
  double truncation_radius = 8.0;  // replaces infinite integral limits
};

namespace detail {

// Gauss-Kronrod 7-15 abscissae/weights on [-1, 1] (positive half).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                  0.417959183673469};

struct Interval {
  double a, b;
};

/// One GK7-15 pass; returns the K15 estimate and the componentwise |K-G|
/// error bound (max over tracked components).
template <class F>
Jet gk15(F&& f, double a, double b, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Jet k15;
  Jet g7;
  const Jet fc = f(mid);
  jet_axpy(kWgk[7], fc, k15);
  jet_axpy(kWg[3], fc, g7);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const Jet fp = f(mid + dx);
    const Jet fm = f(mid - dx);
    jet_axpy(kWgk[i], fp, k15);
    jet_axpy(kWgk[i], fm, k15);
    if (i % 2 == 1) {
      jet_axpy(kWg[i / 2], fp, g7);
      jet_axpy(kWg[i / 2], fm, g7);
    }
  }
  k15 = jet_scale(k15, half);
  g7 = jet_scale(g7, half);
  err = std::abs(k15.v() - g7.v());
  for (int i = 0; i < k15.dim(); ++i) {
    err = std::max(err, std::abs(k15.d(i) - g7.d(i)));
    for (int j = i; j < k15.dim(); ++j) err = std::max(err, std::abs(k15.d2(i, j) - g7.d2(i, j)));
  }
  return k15;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of a jet-valued integrand over [a, b]
/// (a > b integrates with flipped sign). Deterministic bisection, local
/// budgets proportional to interval length. Throws QuadratureFailure with
/// the worst subinterval when the subdivision cap is hit.
template <class F>
Jet integrate(F&& f, double a, double b, const QuadConfig& cfg) {
  if (a == b) return Jet{};
  if (a > b) return -integrate(f, b, a, cfg);

  const double total = b - a;
  double err0 = 0.0;
  Jet whole = detail::gk15(f, a, b, err0);
  double scale = std::abs(whole.v());
  for (int i = 0; i < whole.dim(); ++i) {
    scale = std::max(scale, std::abs(whole.d(i)));
    for (int j = i; j < whole.dim(); ++j) scale = std::max(scale, std::abs(whole.d2(i, j)));
  }
  const double budget = std::max(cfg.abs_tol, cfg.rel_tol * scale);
  if (err0 <= budget) return whole;

  Jet sum;
  int used = 0;
  // explicit stack, left interval first: deterministic accumulation order
  std::vector<detail::Interval> todo{{a, b}};
  std::vector<detail::Interval> stack;
  while (!todo.empty()) {
    const auto [ia, ib] = todo.back();
    todo.pop_back();
    if (++used > cfg.max_subdivisions)
      throw EvalError(FaultKind::QuadratureFailure,
                      "integrate: subdivision limit reached near [" + std::to_string(ia) + ", " +
                          std::to_string(ib) + "]");
    double err = 0.0;
    Jet part = detail::gk15(f, ia, ib, err);
    const double local = budget * ((ib - ia) / total);
    const double width = ib - ia;
    if (err <= std::max(local, 1e-16 * scale) || width <= 1e-14 * total) {
      jet_axpy(1.0, part, sum);
      continue;
    }
    const double mid = 0.5 * (ia + ib);
    // push right first so the left half is processed first
    todo.push_back({mid, ib});
    todo.push_back({ia, mid});
  }
  return sum;
}

/// Spec-surface convenience: integrate a Jet2-valued integrand (axes t, x).
Jet2 integrate_jet2(const std::function<Jet2(double)>& f, double a, double b,
                    const QuadConfig& cfg);

}  // namespace pdexact::quad

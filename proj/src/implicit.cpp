#include "pdexact/implicit.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pdexact::implicit {

namespace {

constexpr int kScanPoints = 16;

}  // namespace

double solve_scalar(const std::function<Probe(double)>& g, double lo, double hi,
                    const RootConfig& cfg, std::optional<double> warm_start) {
  if (!(lo <= hi)) std::swap(lo, hi);

  // Probes may fault (the equation can contain integrals and inner roots);
  // a faulting probe is treated as "no information", not a hard error.
  auto probe = [&g](double xx) -> std::optional<Probe> {
    try {
      Probe p = g(xx);
      if (!std::isfinite(p.g)) return std::nullopt;
      return p;
    } catch (const EvalError&) {
      return std::nullopt;
    }
  };

  double a = lo, b = hi;
  auto pa = probe(a), pb = probe(b);
  if (pa && pa->g == 0.0) return a;
  if (pb && pb->g == 0.0) return b;

  double fa = pa ? pa->g : 0.0, fb = pb ? pb->g : 0.0;
  bool bracketed = pa && pb && std::signbit(fa) != std::signbit(fb);
  if (!bracketed) {
    // scan for an interior sign change before giving up on the bracket
    bool have_prev = static_cast<bool>(pa);
    double prev_x = a, prev_f = fa;
    for (int i = 1; i <= kScanPoints; ++i) {
      const double xx = lo + (hi - lo) * i / kScanPoints;
      const auto px = probe(xx);
      if (!px) {
        have_prev = false;
        continue;
      }
      if (px->g == 0.0) return xx;
      if (have_prev && std::signbit(px->g) != std::signbit(prev_f)) {
        a = prev_x;
        fa = prev_f;
        b = xx;
        fb = px->g;
        bracketed = true;
        break;
      }
      have_prev = true;
      prev_x = xx;
      prev_f = px->g;
    }
  }

  const double gscale =
      std::max({1.0, pa ? std::abs(fa) : 0.0, pb ? std::abs(fb) : 0.0});

  // Phase 1: a warm start selects the branch; trust plain Newton near it
  // before any bracket shrinking (several roots may lie inside the bracket).
  if (warm_start && std::isfinite(*warm_start)) {
    const double pad = 0.25 * (hi - lo);
    double w = *warm_start;
    for (int it = 0; it < cfg.max_iter; ++it) {
      const auto p = probe(w);
      if (!p) break;
      if (std::abs(p->g) <= 1e-15 * gscale) return w;
      if (p->dg == 0.0 || !std::isfinite(p->dg)) break;
      const double next = w - p->g / p->dg;
      if (next < lo - pad || next > hi + pad) break;
      if (std::abs(next - w) <= 1e-16 * std::max(1.0, std::abs(w))) {
        w = next;
        const auto pf = probe(w);
        if (pf && std::abs(pf->g) <= cfg.tol * gscale) return w;
        break;
      }
      w = next;
    }
    // fall through to the bracketed phase when Newton alone stalls
  }

  double w;
  if (bracketed) {
    w = (warm_start && std::isfinite(*warm_start) && *warm_start >= a && *warm_start <= b)
            ? *warm_start
            : 0.5 * (a + b);
  } else if (warm_start && std::isfinite(*warm_start)) {
    w = *warm_start;  // last resort: damped Newton without a net
  } else {
    throw EvalError(FaultKind::NoBracket,
                    "solve_scalar: no sign change on the bracket and no usable warm start");
  }
  double best = w;
  double best_g = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iter; ++it) {
    const auto p = probe(w);
    if (!p) {
      if (!bracketed)
        throw EvalError(FaultKind::ConvergenceFailure,
                        "solve_scalar: iterate left the evaluable region");
      w = 0.5 * (a + b);
      continue;
    }
    const double aw = std::abs(p->g);
    if (aw < best_g) {
      best = w;
      best_g = aw;
    }
    if (aw <= 1e-15 * gscale) return w;
    if (bracketed) {
      if (std::signbit(p->g) == std::signbit(fa)) {
        a = w;
        fa = p->g;
      } else {
        b = w;
        fb = p->g;
      }
    }
    double next;
    if (p->dg != 0.0 && std::isfinite(p->dg)) {
      next = w - p->g / p->dg;
      if (bracketed && (next <= a || next >= b)) next = 0.5 * (a + b);
    } else if (bracketed) {
      next = 0.5 * (a + b);
    } else {
      break;
    }
    if (std::abs(next - w) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    w = next;
  }
  if (best_g <= cfg.tol || best_g <= cfg.tol * gscale) return best;
  throw EvalError(FaultKind::ConvergenceFailure,
                  "solve_scalar: iteration stalled with |g| = " + std::to_string(best_g));
}

Jet ift_reduce(const Jet& g_jet, double root_value, const RootConfig& cfg) {
  const int n = g_jet.dim() - 1;  // unknown is the last axis
  const double gw = g_jet.d(n);
  if (std::abs(gw) < cfg.eps_w)
    throw EvalError(FaultKind::SingularJacobian,
                    "eval_root: |dG/dW| below the implicit-function threshold");
  Jet w = Jet::constant(n, root_value);
  for (int i = 0; i < n; ++i) w.d(i) = -g_jet.d(i) / gw;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w.d2(i, j) = -(g_jet.d2(i, j) + g_jet.d2(i, n) * w.d(j) + g_jet.d2(j, n) * w.d(i) +
                     g_jet.d2(n, n) * w.d(i) * w.d(j)) /
                   gw;
  return w;
}

}  // namespace pdexact::implicit

#include "pdexact/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdexact::funcspace {

namespace {

constexpr double kPi = 3.14159265358979323846;

double base_eval(const std::array<double, 7>& c, int k, double z) {
  // d^k/dz^k [c0 + c1 z + c2 sin(c3 z + c4) + c5 exp(c6 z)]
  if (k == 0) return c[0] + c[1] * z + c[2] * std::sin(c[3] * z + c[4]) + c[5] * std::exp(c[6] * z);
  double r = (k == 1) ? c[1] : 0.0;
  r += c[2] * std::pow(c[3], k) * std::sin(c[3] * z + c[4] + 0.5 * kPi * k);
  r += c[5] * std::pow(c[6], k) * std::exp(c[6] * z);
  return r;
}

/// Bump value and derivatives (w.r.t. u) up to order 3.
std::array<double, 4> bump_derivs(double u) {
  std::array<double, 4> b{};
  if (std::abs(u) >= 1.0) return b;  // identically zero outside, all orders
  const double q = 1.0 - u * u;      // q > 0
  const double q1 = -2.0 * u, q2 = -2.0;
  // r = 1/q via Faa di Bruno
  const double h1 = -1.0 / (q * q), h2 = 2.0 / (q * q * q), h3 = -6.0 / (q * q * q * q);
  const double r1 = h1 * q1;
  const double r2 = h2 * q1 * q1 + h1 * q2;
  const double r3 = h3 * q1 * q1 * q1 + 3.0 * h2 * q1 * q2;
  // s = 1 - 1/q, B = exp(s)
  const double s1 = -r1, s2 = -r2, s3 = -r3;
  const double B = std::exp(1.0 - 1.0 / q);
  b[0] = B;
  b[1] = B * s1;
  b[2] = B * (s1 * s1 + s2);
  b[3] = B * (s1 * s1 * s1 + 3.0 * s1 * s2 + s3);
  return b;
}

}  // namespace

double SmoothFn::eval(int deriv, double z) const {
  if (!compact) {
    if (deriv < 0 || deriv > 5)
      throw EvalError(FaultKind::DomainError, "SmoothFn: derivative order out of range");
    return base_eval(c, deriv, z);
  }
  if (deriv < 0 || deriv > 3)
    throw EvalError(FaultKind::DomainError, "SmoothFn: compact member supports orders 0..3");
  const double u = (z - center) / radius;
  if (std::abs(u) >= 1.0) return 0.0;
  auto b = bump_derivs(u);
  // chain through u = (z-center)/radius: each u-derivative picks up 1/radius
  double s = 1.0;
  for (int k = 1; k < 4; ++k) {
    s /= radius;
    b[static_cast<std::size_t>(k)] *= s;
  }
  const double f0 = base_eval(c, 0, z);
  if (deriv == 0) return f0 * b[0];
  const double f1 = base_eval(c, 1, z);
  if (deriv == 1) return f1 * b[0] + f0 * b[1];
  const double f2 = base_eval(c, 2, z);
  if (deriv == 2) return f2 * b[0] + 2.0 * f1 * b[1] + f0 * b[2];
  const double f3 = base_eval(c, 3, z);
  return f3 * b[0] + 3.0 * f2 * b[1] + 3.0 * f1 * b[2] + f0 * b[3];
}

namespace {

// splitmix64; stable across platforms, unlike the std distributions
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
};

constexpr int kGuardSamples = 201;
constexpr int kMaxAttempts = 50;

bool guard_holds(const SmoothFn& f, const Guard& g) {
  // Amplitude guards constrain the base member for compact slots; the bump
  // factor takes the full function to zero at the support edge regardless.
  SmoothFn probe = f;
  if (g.kind != GuardKind::CompactSupport) probe.compact = false;
  switch (g.kind) {
    case GuardKind::None:
      return true;
    case GuardKind::CompactSupport:
      // support must lie strictly inside [-radius, radius]
      return f.compact && std::abs(f.center) + f.radius <= g.radius &&
             f.eval(0, -g.radius) == 0.0 && f.eval(0, g.radius) == 0.0;
    default:
      break;
  }
  const double step = (g.z_hi - g.z_lo) / (kGuardSamples - 1);
  for (int i = 0; i < kGuardSamples; ++i) {
    const double z = g.z_lo + step * i;
    switch (g.kind) {
      case GuardKind::NonvanishingDeriv:
        if (std::abs(probe.eval(g.order, z)) < g.min_abs) return false;
        break;
      case GuardKind::Positive:
        if (probe.eval(g.order, z) < g.min) return false;
        break;
      case GuardKind::BoundedRange: {
        const double v = probe.eval(g.order, z);
        if (v < g.lo || v > g.hi) return false;
        break;
      }
      default:
        break;
    }
  }
  return true;
}

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  void clip(double a, double b) {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  bool empty() const { return !(lo <= hi); }
};

/// Range of the order-k derivative of the non-affine part
/// c2 sin(c3 z + c4) + c5 exp(c6 z) (plus c1 for k = 1 handled by caller)
/// over [zlo, zhi], by dense sampling.
std::array<double, 2> osc_range(const std::array<double, 7>& c, int k, double zlo, double zhi) {
  std::array<double, 7> cc = c;
  cc[0] = 0.0;
  if (k == 0) cc[1] = 0.0;  // for order 1 the caller zeroes c1 itself
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < kGuardSamples; ++i) {
    const double z = zlo + (zhi - zlo) * i / (kGuardSamples - 1);
    const double v = base_eval(cc, k, z);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

bool guards_pass(const SmoothFn& f, const SlotConstraint& constraint) {
  for (const auto& g : constraint.guards)
    if (!guard_holds(f, g)) return false;
  return true;
}

std::uint64_t seed_mix(std::uint64_t seed, const std::string& tag) {
  // FNV-1a over the tag, folded into the seed
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : tag) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h ^ (seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
}

// The sampler draws the oscillation shape (c3, c4, c6) freely, scales the
// slope/amplitude coefficients to the tightest band guard so banded members
// are reachable, and then solves the affine coefficients c1 (order-1 guards)
// and c0 (order-0 guards) against the sampled non-affine part. Every guard
// is still verified by dense sampling before a member is accepted.
SmoothFn sample(const std::string& slot, const SlotConstraint& constraint, std::uint64_t seed) {
  bool compact = false;
  double support_radius = 0.0;
  for (const auto& g : constraint.guards)
    if (g.kind == GuardKind::CompactSupport) {
      compact = true;
      support_radius = g.radius;
    }

  // amplitude budgets from band guards
  double slope_cap = 1.0, osc_cap = 1.0, exp_cap = 1.0;
  for (const auto& g : constraint.guards) {
    if (g.kind != GuardKind::BoundedRange) continue;
    const double band = g.hi - g.lo;
    const double width = std::max(1e-9, g.z_hi - g.z_lo);
    if (g.order == 0) {
      slope_cap = std::min(slope_cap, 0.5 * band / width);
      osc_cap = std::min(osc_cap, 0.35 * band);
      exp_cap = std::min(exp_cap, 0.35 * band);
    } else if (g.order == 1) {
      osc_cap = std::min(osc_cap, 0.35 * band);
      exp_cap = std::min(exp_cap, 0.35 * band);
    }
  }

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng{seed_mix(seed, slot) + 0x51ed2701ab5cf3a7ULL * static_cast<std::uint64_t>(attempt)};
    SmoothFn f;
    f.c[3] = rng.uniform(0.25, 1.5);
    f.c[4] = rng.uniform(0.0, 2.0 * kPi);
    f.c[6] = rng.uniform(-1.5, 1.5);
    f.c[2] = rng.uniform(std::min(0.15, 0.5 * osc_cap), std::max(0.15, osc_cap));
    f.c[5] = rng.uniform(-1.0, 1.0);
    // keep the exponential's contribution within budget across guard windows
    double zmax_abs = 1.5;
    for (const auto& g : constraint.guards)
      if (g.kind != GuardKind::CompactSupport && g.kind != GuardKind::None)
        zmax_abs = std::max({zmax_abs, std::abs(g.z_lo), std::abs(g.z_hi)});
    const double egrow = std::exp(std::abs(f.c[6]) * zmax_abs);
    if (std::abs(f.c[5]) * egrow > exp_cap) f.c[5] *= exp_cap / (std::abs(f.c[5]) * egrow);
    f.c[1] = rng.uniform(-std::min(1.0, slope_cap), std::min(1.0, slope_cap));

    if (compact) {
      f.compact = true;
      const double side = (rng.next() & 1) ? 1.0 : -1.0;
      f.radius = rng.uniform(0.5, 0.45 * support_radius);
      f.center = side * rng.uniform(1.0 + f.radius, support_radius - f.radius);
    }

    // solve c1 against order-1 guards
    bool feasible = true;
    {
      Interval c1span;
      c1span.clip(-std::min(1.0, std::max(slope_cap, 0.05)), std::min(1.0, std::max(slope_cap, 0.05)));
      bool have = false;
      std::array<double, 7> probe = f.c;
      probe[1] = 0.0;
      for (const auto& g : constraint.guards) {
        if (g.order != 1) continue;
        if (g.kind == GuardKind::BoundedRange) {
          const auto r = osc_range(probe, 1, g.z_lo, g.z_hi);
          c1span.clip(g.lo - r[0], g.hi - r[1]);
          have = true;
        } else if (g.kind == GuardKind::Positive) {
          const auto r = osc_range(probe, 1, g.z_lo, g.z_hi);
          c1span.clip(g.min - r[0], std::numeric_limits<double>::infinity());
          c1span.clip(-1.5, 1.5);
          have = true;
        } else if (g.kind == GuardKind::NonvanishingDeriv) {
          const auto r = osc_range(probe, 1, g.z_lo, g.z_hi);
          if (attempt % 2 == 0)
            c1span.clip(g.min_abs - r[0], 1.5);
          else
            c1span.clip(-1.5, -g.min_abs - r[1]);
          have = true;
        }
      }
      if (have) {
        if (c1span.empty()) continue;
        f.c[1] = rng.uniform(c1span.lo, c1span.hi);
      }
    }

    // solve c0 against order-0 guards
    {
      Interval c0span;
      c0span.clip(-3.0, 3.0);
      bool have = false;
      for (const auto& g : constraint.guards) {
        if (g.order != 0) continue;
        if (g.kind == GuardKind::BoundedRange) {
          const auto r = osc_range(f.c, 0, g.z_lo, g.z_hi);
          c0span.clip(g.lo - r[0], g.hi - r[1]);
          have = true;
        } else if (g.kind == GuardKind::Positive) {
          const auto r = osc_range(f.c, 0, g.z_lo, g.z_hi);
          c0span.clip(g.min - r[0], std::numeric_limits<double>::infinity());
          c0span.clip(-3.0, 3.0);
          have = true;
        } else if (g.kind == GuardKind::NonvanishingDeriv) {
          const auto r = osc_range(f.c, 0, g.z_lo, g.z_hi);
          if (attempt % 2 == 0)
            c0span.clip(g.min_abs - r[0], 3.0);
          else
            c0span.clip(-3.0, -g.min_abs - r[1]);
          have = true;
        }
      }
      if (have && c0span.empty()) {
        feasible = false;
      } else {
        f.c[0] = have ? rng.uniform(c0span.lo, c0span.hi) : rng.uniform(-2.0, 2.0);
      }
    }
    if (!feasible) continue;

    if (guards_pass(f, constraint)) return f;
  }
  throw EvalError(FaultKind::SamplingExhausted,
                  "sample: no family member satisfied the guards for slot '" + slot +
                      "' after 50 attempts (over-tight guard?)");
}

}  // namespace pdexact::funcspace

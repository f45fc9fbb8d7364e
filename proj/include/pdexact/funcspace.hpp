#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pdexact/errors.hpp"

namespace pdexact::funcspace {

/// Concrete member of the arbitrary-function family
///   f(z) = c0 + c1 z + c2 sin(c3 z + c4) + c5 exp(c6 z),
/// optionally windowed by the smooth compact bump
///   B(u) = exp(1 - 1/(1 - u^2)) for |u| < 1, 0 outside, u = (z-center)/radius
/// so that compact-support slots vanish identically outside their support.
/// Closed form gives exact derivatives of every order the evaluator needs.
struct SmoothFn {
  std::array<double, 7> c{};
  bool compact = false;
  double center = 0.0;
  double radius = 1.0;

  /// Exact derivative of order `deriv` at z. Orders up to 5 are available for
  /// plain members (integrand jets of primed slots need them); compact
  /// members support orders up to 3.
  double eval(int deriv, double z) const;
};

enum class GuardKind : std::uint8_t {
  None,
  NonvanishingDeriv,
  Positive,
  BoundedRange,
  CompactSupport,
};

/// One nondegeneracy guard, checked by dense sampling (201 points) on
/// [z_lo, z_hi]. `order` selects which derivative the guard constrains
/// (0 = the function itself, 1 = its slope). For compact-support slots the
/// amplitude-type guards constrain the base member; the bump factor takes
/// the function to zero at the support edge by construction.
struct Guard {
  GuardKind kind = GuardKind::None;
  int order = 0;
  double min_abs = 0;  // NonvanishingDeriv
  double min = 0;      // Positive
  double lo = 0;       // BoundedRange
  double hi = 0;       // BoundedRange
  double radius = 0;   // CompactSupport
  double z_lo = 0;
  double z_hi = 1;
};

/// The guards one catalogue entry declares for one slot (a conjunction).
struct SlotConstraint {
  std::vector<Guard> guards;
};

/// Deterministic in (slot, constraint, seed). Draws coefficients from the
/// documented ranges and resamples with an incremented sub-seed until every
/// guard passes; throws SamplingExhausted after 50 attempts.
SmoothFn sample(const std::string& slot, const SlotConstraint& constraint, std::uint64_t seed);

inline double eval_fn(const SmoothFn& f, int deriv, double z) { return f.eval(deriv, z); }

/// True when every guard holds for f (dense sampling as in `sample`).
bool guards_pass(const SmoothFn& f, const SlotConstraint& constraint);

/// Stable 64-bit mix used to derive independent per-slot seed streams.
std::uint64_t seed_mix(std::uint64_t seed, const std::string& tag);

}  // namespace pdexact::funcspace

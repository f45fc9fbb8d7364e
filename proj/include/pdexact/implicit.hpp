#pragma once

#include <functional>
#include <optional>

#include "pdexact/jet.hpp"

namespace pdexact::implicit {

struct RootConfig {
  double tol = 1e-12;    // accepted |g(W)|
  double eps_w = 1e-10;  // |dG/dW| below this is a singular Jacobian
  int max_iter = 100;
};

/// g evaluated together with its derivative (one Newton probe).
struct Probe {
  double g = 0;
  double dg = 0;
};

/// Safeguarded Newton with a bisection fallback on [lo, hi].
///
/// The interval must change sign, or a warm start close to the root must be
/// supplied (a warm start also selects the branch when several roots lie in
/// the bracket). The result is polished well past `tol` so downstream
/// finite-difference probes of the root path stay quiet.
double solve_scalar(const std::function<Probe(double)>& g, double lo, double hi,
                    const RootConfig& cfg, std::optional<double> warm_start = std::nullopt);

/// Implicit-function-theorem reduction: given the jet of G over the axes
/// (outer..., W) with the unknown as the LAST axis and G(W*) = 0, returns the
/// jet of W over the outer axes.
///   W_i  = -G_i / G_W
///   W_ij = -(G_ij + G_iW W_j + G_jW W_i + G_WW W_i W_j) / G_W
Jet ift_reduce(const Jet& g_jet, double root_value, const RootConfig& cfg);

}  // namespace pdexact::implicit

#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdexact/expr.hpp"
#include "pdexact/funcspace.hpp"
#include "pdexact/implicit.hpp"
#include "pdexact/jet.hpp"
#include "pdexact/quad.hpp"

namespace pdexact {

/// Warm-start store for root nodes; one per evaluation context (a grid row,
/// a finite-difference stencil). Never shared between threads.
class WarmCache {
 public:
  std::optional<double> get(const Expr* node) const {
    auto it = last_.find(node);
    if (it == last_.end()) return std::nullopt;
    return it->second;
  }
  void put(const Expr* node, double w) { last_[node] = w; }
  void clear() { last_.clear(); }

 private:
  std::map<const Expr*, double> last_;
};

/// Per-evaluation accounting the verifier folds into reports.
struct EvalStats {
  double max_root_defect = 0.0;  // max |G(W)| over accepted roots
};

/// Everything an evaluation needs at one point. Hooks are pure given
/// identical inputs; the warm cache is the only mutable member.
struct EvalEnv {
  double t = 0.0;
  double x = 0.0;
  const std::map<std::string, double>* params = nullptr;
  const std::map<std::string, funcspace::SmoothFn>* slots = nullptr;
  quad::QuadConfig quad;
  implicit::RootConfig root;
  /// Warm-start jump cap for roots solved directly in the (t, x) frame;
  /// +inf disables the check.
  double branch_cap = std::numeric_limits<double>::infinity();
  WarmCache* warm = nullptr;
  EvalStats* stats = nullptr;
  /// Entry-level flag for the superposition evaluator: integrals split into
  /// top-level terms, each clipped to the support of its compact slot.
  bool superposition = false;
};

/// Full second-order jet of a solution expression at (env.t, env.x).
/// The expression must be a solution (no field variables); all free names
/// must be bound by env.params / env.slots.
Jet2 eval_expr(const Expr& e, EvalEnv& env);
inline Jet2 eval_expr(const ExprPtr& e, EvalEnv& env) { return eval_expr(*e, env); }

/// Value-only evaluation (no derivative propagation); this is what the
/// finite-difference oracle differentiates.
double eval_value(const Expr& e, EvalEnv& env);
inline double eval_value(const ExprPtr& e, EvalEnv& env) { return eval_value(*e, env); }

struct ResidualValue {
  double value = 0.0;
  std::vector<double> term_magnitudes;  // |top-level additive terms|
};

/// Scalar residual with the candidate jet substituted for w, w_t, w_x, w_tt,
/// w_tx, w_xx. Also reports the magnitudes of the top-level additive terms
/// for normalization.
ResidualValue residual_eval(const Expr& residual, const Jet2& wjet, EvalEnv& env);

/// Normalized residual |R| / (1 + sum |terms|).
double normalized_residual(const ResidualValue& r);

/// The superposition evaluator for the double-integral entries: numerator
/// and denominator integrals evaluated as jets (with compact-support
/// clipping), then their quotient.
Jet2 integrate_superposition(const Expr& numerator, const Expr& denominator, EvalEnv& env);

}  // namespace pdexact

#pragma once

#include <stdexcept>
#include <string>

#include "pdexact/expr.hpp"

namespace pdexact {

enum class FaultKind {
  DomainError,
  DivisionByZero,
  NonFinite,
  QuadratureFailure,
  NoBracket,
  ConvergenceFailure,
  SingularJacobian,
  BranchJump,
  SamplingExhausted,
  ConstraintViolation,
};

const char* fault_kind_name(FaultKind k);

/// Runtime evaluation fault. The evaluator attaches the source span of the
/// node that raised it; numerical kernels throw with an empty span.
struct EvalError : std::runtime_error {
  FaultKind kind;
  SourceSpan span{};
  bool has_span = false;

  EvalError(FaultKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}

  /// WindowFaults: isolated singular points inside a sampling window
  /// (vanishing denominators, domain edges, a singular implicit-function
  /// Jacobian). They are excluded from residual maxima and counted;
  /// everything else fails an entry outright.
  bool is_window_fault() const {
    return kind == FaultKind::DomainError || kind == FaultKind::DivisionByZero ||
           kind == FaultKind::NonFinite || kind == FaultKind::SingularJacobian;
  }
};

}  // namespace pdexact

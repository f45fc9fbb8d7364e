#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdexact {

/// Byte range into the source text an expression was parsed from.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class NodeKind : std::uint8_t {
  Const,
  Param,
  Var,
  FieldVar,
  ArbFn,
  Unary,
  Binary,
  Special,
  Integral,
  Root,
};

enum class VarKind : std::uint8_t { T, X, Dummy };

enum class FieldKind : std::uint8_t { W, Wt, Wx, Wtt, Wtx, Wxx };

enum class UnaryOp : std::uint8_t { Neg, Exp, Ln, Sqrt, Sin, Cos, Sinh, Cosh, Tan, Abs };

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

enum class SpecialKind : std::uint8_t { LambertW0, LambertWm1, Erf, Expint1, WhitM, KummerM };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. One node type covers residuals (which may use
/// field variables w, w_t, ...) and solution formulas (which may use
/// integrals, implicit roots and special functions).
///
/// Child layout by kind:
///   Unary    {arg}
///   Binary   {lhs, rhs}
///   ArbFn    {arg}                      name = slot, deriv = prime count
///   Special  {args...}
///   Integral {lower, upper, integrand}  name = dummy
///   Root     {lo, hi, equation, body}   name = unknown
struct Expr {
  NodeKind kind = NodeKind::Const;
  SourceSpan span{};
  double value = 0.0;
  std::string name;
  VarKind var = VarKind::T;
  FieldKind field = FieldKind::W;
  int deriv = 0;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  SpecialKind special = SpecialKind::Erf;
  std::vector<ExprPtr> args;
};

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(SourceSpan s, const std::string& msg) : std::runtime_error(msg), span(s) {}
};

/// Raised when a dummy or root unknown escapes its binder, or a binder
/// shadows a declared parameter (detected during entry validation).
struct UnboundNameError : ParseError {
  using ParseError::ParseError;
};

// -- construction helpers (used by the parser and by tests) --
ExprPtr make_const(double v);
ExprPtr make_param(std::string name);
ExprPtr make_var(VarKind k, std::string dummy_name = {});
ExprPtr make_field(FieldKind f);
ExprPtr make_arbfn(std::string slot, int deriv, ExprPtr arg);
ExprPtr make_unary(UnaryOp op, ExprPtr arg);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_special(SpecialKind k, std::vector<ExprPtr> args);
ExprPtr make_integral(std::string dummy, ExprPtr lower, ExprPtr upper, ExprPtr integrand);
ExprPtr make_root(std::string unknown, ExprPtr lo, ExprPtr hi, ExprPtr equation, ExprPtr body);

/// Parses the expression grammar. Precedence, loosest first:
///   + -   (left)
///   * /   (left)
///   unary -
///   ^     (right; binds tighter than unary minus)
/// plus calls `name(args)`, primes on identifiers (F', F''),
/// `int(u=lo..hi, integrand)` and `root(W in [lo,hi] : eq ; body)`.
/// `inf` is reserved and parses to an infinite constant (legal only as an
/// integral limit, where it stands for the configured truncation radius).
ExprPtr parse(const std::string& src);

/// Canonical printer; parse(print(e)) is structurally identical to e.
std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

/// Deep structural equality (Const values compared exactly).
bool equal(const Expr& a, const Expr& b);
inline bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }

/// Free names: parameters, arbitrary-function slots and field variables.
/// Dummies bound by int() and unknowns bound by root() are excluded.
std::set<std::string> free_names(const Expr& e);
inline std::set<std::string> free_names(const ExprPtr& e) { return free_names(*e); }

/// True if any FieldVar occurs in the tree.
bool uses_field_vars(const Expr& e);

/// Validation pass run at catalogue load.
///  - residuals: field vars allowed, no Integral/Root nodes;
///  - solutions: no field vars;
///  - every Param must be declared, every ArbFn slot must be declared;
///  - binders must not shadow declared parameters or slots;
///  - integral lower limits must be constant-valued (params and consts only);
///  - ArbFn derivative order <= 3.
/// Throws ParseError/UnboundNameError with the offending span.
void validate_expr(const Expr& e, const std::set<std::string>& params,
                   const std::set<std::string>& slots, bool is_residual);

const char* field_name(FieldKind f);

}  // namespace pdexact

#include "pdexact/eval.hpp"

#include <cmath>

#include "pdexact/special.hpp"

namespace pdexact {

namespace {

/// Lexical frame of one evaluation: ordered axes (the variables the jet
/// differentiates against) plus names bound to already-computed jets.
/// Inner constructs append axes, so outer axis indices stay stable and a
/// jet of the outer frame is valid in the inner frame as-is.
struct Frame {
  struct Axis {
    std::string name;
    double value;
  };
  std::vector<Axis> axes;
  std::vector<std::pair<std::string, Jet>> lets;

  int dim() const { return static_cast<int>(axes.size()); }

  /// True when no integration dummy is in scope: roots solved here belong to
  /// the solution surface itself and get branch-continuity checking.
  bool top_level() const {
    for (const auto& a : axes)
      if (a.name != "t" && a.name != "x") return false;
    return true;
  }

  /// Same bindings with every derivative dropped; used for value-level
  /// sub-evaluations (brackets, scalar root iterations).
  Frame collapsed() const {
    Frame f;
    f.lets.reserve(axes.size() + lets.size());
    for (const auto& a : axes) f.lets.emplace_back(a.name, Jet::constant(0, a.value));
    for (const auto& l : lets) f.lets.emplace_back(l.first, Jet::constant(0, l.second.v()));
    return f;
  }
};

class Evaluator {
 public:
  explicit Evaluator(EvalEnv& env) : env_(env) {}

  Jet eval(const Expr& e, const Frame& frame) {
    try {
      Jet r = dispatch(e, frame);
      if (!r.finite())
        throw EvalError(FaultKind::NonFinite, "non-finite value in evaluation");
      return r;
    } catch (EvalError& err) {
      if (!err.has_span) {
        err.span = e.span;
        err.has_span = true;
      }
      throw;
    }
  }

 private:
  Jet dispatch(const Expr& e, const Frame& frame) {
    switch (e.kind) {
      case NodeKind::Const:
        if (std::isinf(e.value))
          throw EvalError(FaultKind::DomainError,
                          "'inf' is only meaningful as an integral limit");
        return Jet::constant(frame.dim(), e.value);
      case NodeKind::Param: {
        if (env_.params) {
          auto it = env_.params->find(e.name);
          if (it != env_.params->end()) return Jet::constant(frame.dim(), it->second);
        }
        throw EvalError(FaultKind::DomainError, "unbound parameter '" + e.name + "'");
      }
      case NodeKind::Var:
        return resolve(var_name(e), frame);
      case NodeKind::FieldVar: {
        if (!field_)
          throw EvalError(FaultKind::DomainError,
                          "field variables are only legal in residual evaluation");
        double v = 0.0;
        switch (e.field) {
          case FieldKind::W: v = field_->v; break;
          case FieldKind::Wt: v = field_->d_t; break;
          case FieldKind::Wx: v = field_->d_x; break;
          case FieldKind::Wtt: v = field_->d_tt; break;
          case FieldKind::Wtx: v = field_->d_tx; break;
          case FieldKind::Wxx: v = field_->d_xx; break;
        }
        return Jet::constant(frame.dim(), v);
      }
      case NodeKind::ArbFn: {
        const Jet u = eval(*e.args[0], frame);
        const auto& fn = slot(e.name);
        const int k = e.deriv;
        return jet_chain(u, fn.eval(k, u.v()), fn.eval(k + 1, u.v()), fn.eval(k + 2, u.v()));
      }
      case NodeKind::Unary: {
        const Jet u = eval(*e.args[0], frame);
        switch (e.uop) {
          case UnaryOp::Neg: return -u;
          case UnaryOp::Exp: return jet_exp(u);
          case UnaryOp::Ln: return jet_ln(u);
          case UnaryOp::Sqrt: return jet_sqrt(u);
          case UnaryOp::Sin: return jet_sin(u);
          case UnaryOp::Cos: return jet_cos(u);
          case UnaryOp::Sinh: return jet_sinh(u);
          case UnaryOp::Cosh: return jet_cosh(u);
          case UnaryOp::Tan: return jet_tan(u);
          case UnaryOp::Abs: return jet_abs(u);
        }
        break;
      }
      case NodeKind::Binary: {
        const Jet a = eval(*e.args[0], frame);
        const Jet b = eval(*e.args[1], frame);
        switch (e.bop) {
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Div: return a / b;
          case BinaryOp::Pow: return jet_pow(a, b);
        }
        break;
      }
      case NodeKind::Special:
        return eval_special(e, frame);
      case NodeKind::Integral:
        return eval_integral(e, frame);
      case NodeKind::Root:
        return eval_root(e, frame);
    }
    throw EvalError(FaultKind::DomainError, "unreachable node kind");
  }

  static const char* var_name(const Expr& e) {
    if (e.var == VarKind::T) return "t";
    if (e.var == VarKind::X) return "x";
    return e.name.c_str();
  }

  Jet resolve(const std::string& name, const Frame& frame) {
    for (auto it = frame.lets.rbegin(); it != frame.lets.rend(); ++it)
      if (it->first == name) return it->second;
    for (int i = frame.dim() - 1; i >= 0; --i)
      if (frame.axes[static_cast<std::size_t>(i)].name == name)
        return Jet::axis(frame.dim(), i, frame.axes[static_cast<std::size_t>(i)].value);
    throw EvalError(FaultKind::DomainError, "unbound variable '" + name + "'");
  }

  const funcspace::SmoothFn& slot(const std::string& name) {
    if (env_.slots) {
      auto it = env_.slots->find(name);
      if (it != env_.slots->end()) return it->second;
    }
    throw EvalError(FaultKind::DomainError, "unbound function slot '" + name + "'");
  }

  Jet eval_special(const Expr& e, const Frame& frame) {
    using namespace special;
    if (e.special == SpecialKind::WhitM || e.special == SpecialKind::KummerM) {
      // first two arguments are entry constants
      const double p0 = eval(*e.args[0], frame.collapsed()).v();
      const double p1 = eval(*e.args[1], frame.collapsed()).v();
      const Jet z = eval(*e.args[2], frame);
      const Deriv2 d = e.special == SpecialKind::WhitM ? whittaker_m_d2(p0, p1, z.v())
                                                       : kummer_m_d2(p0, p1, z.v());
      return jet_chain(z, d.f, d.df, d.ddf);
    }
    const Jet z = eval(*e.args[0], frame);
    Deriv2 d;
    switch (e.special) {
      case SpecialKind::LambertW0: d = lambert_w_d2(0, z.v()); break;
      case SpecialKind::LambertWm1: d = lambert_w_d2(-1, z.v()); break;
      case SpecialKind::Erf: d = erf_d2(z.v()); break;
      case SpecialKind::Expint1: d = expint1_d2(z.v()); break;
      default: throw EvalError(FaultKind::DomainError, "unreachable special kind");
    }
    return jet_chain(z, d.f, d.df, d.ddf);
  }

  double limit_value(const Expr& e, const Frame& frame) {
    if (e.kind == NodeKind::Const && std::isinf(e.value))
      return std::copysign(env_.quad.truncation_radius, e.value);
    return eval(e, frame.collapsed()).v();
  }

  /// Leibniz rule to second order. With I(y) = int_L^{U(y)} h(s, y) ds:
  ///   I_i  = h(U) U_i + int h_i
  ///   I_ij = h_s(U) U_i U_j + h_i(U) U_j + h_j(U) U_i + h(U) U_ij + int h_ij
  Jet eval_integral(const Expr& e, const Frame& frame) {
    const Expr& lower = *e.args[0];
    const Expr& upper = *e.args[1];
    const Expr& integrand = *e.args[2];
    const int n = frame.dim();

    const double lo = limit_value(lower, frame);
    Jet up;
    if (upper.kind == NodeKind::Const && std::isinf(upper.value))
      up = Jet::constant(n, std::copysign(env_.quad.truncation_radius, upper.value));
    else
      up = eval(upper, frame);

    Frame inner = frame;
    inner.axes.push_back({e.name, 0.0});
    auto f = [&](double s) {
      inner.axes.back().value = s;
      return eval(integrand, inner);
    };

    Jet integral = Jet::constant(n + 1, 0.0);
    if (env_.superposition) {
      std::vector<SignedTerm> sterms;
      split_signed(integrand, 1.0, sterms);
      for (const auto& [term, sign] : sterms)
        jet_axpy(sign, integrate_clipped(*term, inner, lo, up.v()), integral);
    } else {
      integral = quad::integrate(f, lo, up.v(), env_.quad);
    }

    // boundary terms vanish unless the upper limit actually varies
    bool upper_varies = false;
    for (int i = 0; i < n && !upper_varies; ++i) {
      if (up.d(i) != 0.0) upper_varies = true;
      for (int j = 0; j < n; ++j)
        if (up.d2(i, j) != 0.0) upper_varies = true;
    }

    Jet r = Jet::constant(n, integral.v());
    for (int i = 0; i < n; ++i) {
      r.d(i) = integral.d(i);
      for (int j = 0; j < n; ++j) r.d2(i, j) = integral.d2(i, j);
    }
    if (upper_varies) {
      inner.axes.back().value = up.v();
      const Jet hb = eval(integrand, inner);
      const double h = hb.v();
      const double hs = hb.d(n);  // derivative along the dummy axis
      for (int i = 0; i < n; ++i) r.d(i) += h * up.d(i);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r.d2(i, j) += hs * up.d(i) * up.d(j) + hb.d(i) * up.d(j) + hb.d(j) * up.d(i) +
                        h * up.d2(i, j);
    }
    return r;
  }

  /// Top-level additive term with its accumulated constant factor. Constant
  /// multipliers and negations distribute over the split so that rescaling a
  /// residual rescales every term magnitude rather than collapsing the sum
  /// into one term.
  struct SignedTerm {
    const Expr* term;
    double sign;
  };

  static void split_signed(const Expr& e, double factor, std::vector<SignedTerm>& out) {
    if (e.kind == NodeKind::Binary && (e.bop == BinaryOp::Add || e.bop == BinaryOp::Sub)) {
      split_signed(*e.args[0], factor, out);
      split_signed(*e.args[1], e.bop == BinaryOp::Sub ? -factor : factor, out);
      return;
    }
    if (e.kind == NodeKind::Unary && e.uop == UnaryOp::Neg) {
      split_signed(*e.args[0], -factor, out);
      return;
    }
    if (e.kind == NodeKind::Binary && e.bop == BinaryOp::Mul) {
      if (e.args[0]->kind == NodeKind::Const) {
        split_signed(*e.args[1], factor * e.args[0]->value, out);
        return;
      }
      if (e.args[1]->kind == NodeKind::Const) {
        split_signed(*e.args[0], factor * e.args[1]->value, out);
        return;
      }
    }
    if (e.kind == NodeKind::Binary && e.bop == BinaryOp::Div &&
        e.args[1]->kind == NodeKind::Const && e.args[1]->value != 0.0) {
      split_signed(*e.args[0], factor / e.args[1]->value, out);
      return;
    }
    out.push_back({&e, factor});
  }

  /// Integrates one term of a superposition integrand over the intersection
  /// of [lo, hi] with the support of the compact slots the term references;
  /// the term is identically zero outside.
  Jet integrate_clipped(const Expr& term, Frame& inner, double lo, double hi) {
    double a = lo, b = hi;
    collect_support(term, a, b);
    const int n = inner.dim();
    if (a >= b) return Jet::constant(n, 0.0);
    auto f = [&](double s) {
      inner.axes.back().value = s;
      return eval(term, inner);
    };
    return quad::integrate(f, a, b, env_.quad);
  }

  void collect_support(const Expr& e, double& a, double& b) {
    if (e.kind == NodeKind::ArbFn && env_.slots) {
      auto it = env_.slots->find(e.name);
      if (it != env_.slots->end() && it->second.compact) {
        a = std::max(a, it->second.center - it->second.radius);
        b = std::min(b, it->second.center + it->second.radius);
      }
    }
    for (const auto& c : e.args) collect_support(*c, a, b);
  }

  Jet eval_root(const Expr& e, const Frame& frame) {
    const Expr& equation = *e.args[2];
    const Expr& body = *e.args[3];

    const double lo = eval(*e.args[0], frame.collapsed()).v();
    const double hi = eval(*e.args[1], frame.collapsed()).v();

    // scalar iteration frame: everything collapsed, unknown as the only axis
    Frame newton = frame.collapsed();
    newton.axes.push_back({e.name, 0.0});
    auto probe = [&](double wv) {
      newton.axes.back().value = wv;
      const Jet gj = eval(equation, newton);
      return implicit::Probe{gj.v(), gj.d(0)};
    };

    std::optional<double> warm = env_.warm ? env_.warm->get(&e) : std::nullopt;
    const double wv = implicit::solve_scalar(probe, lo, hi, env_.root, warm);

    if (warm && frame.top_level() && std::isfinite(env_.branch_cap) &&
        std::abs(wv - *warm) > env_.branch_cap)
      throw EvalError(FaultKind::BranchJump,
                      "eval_root: continuation jumped branches (|dW| = " +
                          std::to_string(std::abs(wv - *warm)) + ")");
    if (env_.warm) env_.warm->put(&e, wv);
    if (env_.stats) {
      newton.axes.back().value = wv;
      const double defect = std::abs(eval(equation, newton).v());
      env_.stats->max_root_defect = std::max(env_.stats->max_root_defect, defect);
    }

    // implicit-function jets: equation differentiated in (outer axes..., W)
    Frame full = frame;
    full.axes.push_back({e.name, wv});
    const Jet gj = eval(equation, full);
    const Jet wjet = implicit::ift_reduce(gj, wv, env_.root);

    Frame with_root = frame;
    with_root.lets.emplace_back(e.name, wjet);
    return eval(body, with_root);
  }

  EvalEnv& env_;
  const Jet2* field_ = nullptr;

 public:
  ResidualValue residual(const Expr& e, const Jet2& wjet) {
    Frame frame;  // value-only, but t/x must resolve
    frame.lets.emplace_back("t", Jet::constant(0, env_.t));
    frame.lets.emplace_back("x", Jet::constant(0, env_.x));
    field_ = &wjet;
    std::vector<SignedTerm> terms;
    split_signed(e, 1.0, terms);
    ResidualValue out;
    try {
      for (const auto& [term, sign] : terms) {
        const double v = sign * eval(*term, frame).v();
        out.value += v;
        out.term_magnitudes.push_back(std::abs(v));
      }
    } catch (...) {
      field_ = nullptr;
      throw;
    }
    field_ = nullptr;
    return out;
  }
};

}  // namespace

Jet2 eval_expr(const Expr& e, EvalEnv& env) {
  Evaluator ev(env);
  Frame frame;
  frame.axes = {{"t", env.t}, {"x", env.x}};
  return to_jet2(ev.eval(e, frame));
}

double eval_value(const Expr& e, EvalEnv& env) {
  Evaluator ev(env);
  Frame frame;
  frame.lets.emplace_back("t", Jet::constant(0, env.t));
  frame.lets.emplace_back("x", Jet::constant(0, env.x));
  return ev.eval(e, frame).v();
}

ResidualValue residual_eval(const Expr& residual, const Jet2& wjet, EvalEnv& env) {
  Evaluator ev(env);
  return ev.residual(residual, wjet);
}

double normalized_residual(const ResidualValue& r) {
  double denom = 1.0;
  for (double m : r.term_magnitudes) denom += m;
  return std::abs(r.value) / denom;
}

Jet2 integrate_superposition(const Expr& numerator, const Expr& denominator, EvalEnv& env) {
  const bool saved = env.superposition;
  env.superposition = true;
  Evaluator ev(env);
  Frame frame;
  frame.axes = {{"t", env.t}, {"x", env.x}};
  Jet2 out;
  try {
    const Jet num = ev.eval(numerator, frame);
    const Jet den = ev.eval(denominator, frame);
    out = to_jet2(num / den);
  } catch (...) {
    env.superposition = saved;
    throw;
  }
  env.superposition = saved;
  return out;
}

}  // namespace pdexact

#include "pdexact/jet.hpp"

#include <algorithm>
#include <cstdlib>

namespace pdexact {

const char* fault_kind_name(FaultKind k) {
  switch (k) {
    case FaultKind::DomainError: return "DomainError";
    case FaultKind::DivisionByZero: return "DivisionByZero";
    case FaultKind::NonFinite: return "NonFinite";
    case FaultKind::QuadratureFailure: return "QuadratureFailure";
    case FaultKind::NoBracket: return "NoBracket";
    case FaultKind::ConvergenceFailure: return "ConvergenceFailure";
    case FaultKind::SingularJacobian: return "SingularJacobian";
    case FaultKind::BranchJump: return "BranchJump";
    case FaultKind::SamplingExhausted: return "SamplingExhausted";
    case FaultKind::ConstraintViolation: return "ConstraintViolation";
  }
  return "?";
}

Jet operator+(const Jet& a, const Jet& b) {
  const int n = std::max(a.dim(), b.dim());
  Jet c = Jet::constant(n, a.v() + b.v());
  for (int i = 0; i < n; ++i) {
    c.d(i) = a.d(i) + b.d(i);
    for (int j = 0; j < n; ++j) c.d2(i, j) = a.d2(i, j) + b.d2(i, j);
  }
  return c;
}

Jet operator-(const Jet& a, const Jet& b) {
  const int n = std::max(a.dim(), b.dim());
  Jet c = Jet::constant(n, a.v() - b.v());
  for (int i = 0; i < n; ++i) {
    c.d(i) = a.d(i) - b.d(i);
    for (int j = 0; j < n; ++j) c.d2(i, j) = a.d2(i, j) - b.d2(i, j);
  }
  return c;
}

Jet operator-(const Jet& a) {
  Jet c = Jet::constant(a.dim(), -a.v());
  for (int i = 0; i < a.dim(); ++i) {
    c.d(i) = -a.d(i);
    for (int j = 0; j < a.dim(); ++j) c.d2(i, j) = -a.d2(i, j);
  }
  return c;
}

Jet& operator+=(Jet& a, const Jet& b) {
  a = a + b;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int n = std::max(a.dim(), b.dim());
  Jet c = Jet::constant(n, a.v() * b.v());
  for (int i = 0; i < n; ++i) {
    c.d(i) = a.d(i) * b.v() + a.v() * b.d(i);
    for (int j = 0; j < n; ++j)
      c.d2(i, j) = a.d2(i, j) * b.v() + a.d(i) * b.d(j) + a.d(j) * b.d(i) + a.v() * b.d2(i, j);
  }
  return c;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.v() == 0.0) throw EvalError(FaultKind::DivisionByZero, "division by zero");
  const int n = std::max(a.dim(), b.dim());
  Jet c = Jet::constant(n, a.v() / b.v());
  for (int i = 0; i < n; ++i) c.d(i) = (a.d(i) - c.v() * b.d(i)) / b.v();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c.d2(i, j) =
          (a.d2(i, j) - c.v() * b.d2(i, j) - c.d(i) * b.d(j) - c.d(j) * b.d(i)) / b.v();
  return c;
}

void jet_axpy(double alpha, const Jet& x, Jet& acc) {
  if (acc.dim() < x.dim()) acc = acc.lifted(x.dim());
  acc.v() += alpha * x.v();
  for (int i = 0; i < x.dim(); ++i) {
    acc.d(i) += alpha * x.d(i);
    for (int j = 0; j < x.dim(); ++j) acc.d2(i, j) += alpha * x.d2(i, j);
  }
}

Jet jet_scale(const Jet& a, double s) {
  Jet c = Jet::constant(a.dim(), s * a.v());
  for (int i = 0; i < a.dim(); ++i) {
    c.d(i) = s * a.d(i);
    for (int j = 0; j < a.dim(); ++j) c.d2(i, j) = s * a.d2(i, j);
  }
  return c;
}

Jet jet_chain(const Jet& u, double f0, double f1, double f2) {
  Jet c = Jet::constant(u.dim(), f0);
  for (int i = 0; i < u.dim(); ++i) {
    c.d(i) = f1 * u.d(i);
    for (int j = 0; j < u.dim(); ++j) c.d2(i, j) = f2 * u.d(i) * u.d(j) + f1 * u.d2(i, j);
  }
  return c;
}

Jet jet_pow_int(const Jet& a, long long k) {
  if (k < 0) {
    Jet one = Jet::constant(a.dim(), 1.0);
    return one / jet_pow_int(a, -k);
  }
  Jet result = Jet::constant(a.dim(), 1.0);
  Jet base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

namespace {

bool is_constant(const Jet& j) {
  for (int i = 0; i < j.dim(); ++i) {
    if (j.d(i) != 0.0) return false;
    for (int k = 0; k < j.dim(); ++k)
      if (j.d2(i, k) != 0.0) return false;
  }
  return true;
}

}  // namespace

Jet jet_pow(const Jet& a, const Jet& b) {
  if (is_constant(b)) {
    const double p = b.v();
    if (p == std::round(p) && std::abs(p) <= 1024.0)
      return jet_pow_int(a.dim() >= b.dim() ? a : a.lifted(b.dim()),
                         static_cast<long long>(p));
    if (a.v() <= 0.0)
      throw EvalError(FaultKind::DomainError, "non-integer power of a non-positive base");
    const double f0 = std::pow(a.v(), p);
    return jet_chain(a, f0, p * f0 / a.v(), p * (p - 1.0) * f0 / (a.v() * a.v()));
  }
  if (a.v() <= 0.0)
    throw EvalError(FaultKind::DomainError, "variable power of a non-positive base");
  return jet_exp(b * jet_ln(a));
}

Jet jet_exp(const Jet& a) {
  const double e = std::exp(a.v());
  return jet_chain(a, e, e, e);
}

Jet jet_ln(const Jet& a) {
  if (a.v() <= 0.0) throw EvalError(FaultKind::DomainError, "ln of a non-positive value");
  return jet_chain(a, std::log(a.v()), 1.0 / a.v(), -1.0 / (a.v() * a.v()));
}

Jet jet_sqrt(const Jet& a) {
  if (a.v() <= 0.0) throw EvalError(FaultKind::DomainError, "sqrt of a non-positive value");
  const double r = std::sqrt(a.v());
  return jet_chain(a, r, 0.5 / r, -0.25 / (r * a.v()));
}

Jet jet_sin(const Jet& a) {
  return jet_chain(a, std::sin(a.v()), std::cos(a.v()), -std::sin(a.v()));
}

Jet jet_cos(const Jet& a) {
  return jet_chain(a, std::cos(a.v()), -std::sin(a.v()), -std::cos(a.v()));
}

Jet jet_sinh(const Jet& a) {
  return jet_chain(a, std::sinh(a.v()), std::cosh(a.v()), std::sinh(a.v()));
}

Jet jet_cosh(const Jet& a) {
  return jet_chain(a, std::cosh(a.v()), std::sinh(a.v()), std::cosh(a.v()));
}

Jet jet_tan(const Jet& a) {
  const double tn = std::tan(a.v());
  const double sec2 = 1.0 + tn * tn;
  return jet_chain(a, tn, sec2, 2.0 * tn * sec2);
}

Jet jet_abs(const Jet& a) {
  if (a.v() == 0.0) throw EvalError(FaultKind::DomainError, "abs is not differentiable at 0");
  return a.v() > 0.0 ? a : -a;
}

Jet2 to_jet2(const Jet& j) {
  Jet2 r;
  r.v = j.v();
  r.d_t = j.d(0);
  r.d_x = j.d(1);
  r.d_tt = j.d2(0, 0);
  r.d_tx = j.d2(0, 1);
  r.d_xx = j.d2(1, 1);
  return r;
}

Jet3 to_jet3(const Jet& j) {
  Jet3 r;
  r.v = j.v();
  r.d_W = j.d(0);
  r.d_t = j.d(1);
  r.d_x = j.d(2);
  r.d_WW = j.d2(0, 0);
  r.d_Wt = j.d2(0, 1);
  r.d_Wx = j.d2(0, 2);
  r.d_tt = j.d2(1, 1);
  r.d_tx = j.d2(1, 2);
  r.d_xx = j.d2(2, 2);
  return r;
}

}  // namespace pdexact

#pragma once

#include <array>
#include <cmath>

#include "pdexact/errors.hpp"

namespace pdexact {

/// Capacity of an evaluation context. The deepest nesting in the catalogue is
/// (inner unknown, dummy, outer unknown, t, x); one spare axis on top.
inline constexpr int kMaxAxes = 6;

/// Second-order truncated Taylor value over a runtime number of axes.
/// With n = 2 the axes are (t, x) and the jet carries exactly the value and
/// the five partials a PDE residual needs; with n = 0 it degenerates to plain
/// value arithmetic (used by the finite-difference oracle).
class Jet {
 public:
  Jet() = default;

  static Jet constant(int n, double v) {
    Jet j;
    j.n_ = n;
    j.v_ = v;
    return j;
  }

  /// Seed jet for axis i: value with first derivative 1 along i.
  static Jet axis(int n, int i, double v) {
    Jet j = constant(n, v);
    j.g_[static_cast<std::size_t>(i)] = 1.0;
    return j;
  }

  int dim() const { return n_; }
  double v() const { return v_; }
  double& v() { return v_; }
  double d(int i) const { return g_[static_cast<std::size_t>(i)]; }
  double& d(int i) { return g_[static_cast<std::size_t>(i)]; }
  double d2(int i, int j) const { return h_[static_cast<std::size_t>(i * kMaxAxes + j)]; }
  double& d2(int i, int j) { return h_[static_cast<std::size_t>(i * kMaxAxes + j)]; }

  /// Same value/derivatives viewed in a context with extra trailing axes
  /// (the new axes see a constant, so their derivatives are zero).
  Jet lifted(int n) const {
    Jet j = *this;
    j.n_ = n;
    return j;
  }

  bool finite() const {
    if (!std::isfinite(v_)) return false;
    for (int i = 0; i < n_; ++i) {
      if (!std::isfinite(d(i))) return false;
      for (int j = i; j < n_; ++j)
        if (!std::isfinite(d2(i, j))) return false;
    }
    return true;
  }

 private:
  int n_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxAxes> g_{};
  std::array<double, static_cast<std::size_t>(kMaxAxes * kMaxAxes)> h_{};
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);  // throws DivisionByZero when b.v() == 0

Jet& operator+=(Jet& a, const Jet& b);

/// axpy used by the quadrature accumulator.
void jet_axpy(double alpha, const Jet& x, Jet& acc);
Jet jet_scale(const Jet& a, double s);

/// Chain rule to second order: f applied to u with f(u.v) = f0, f' = f1, f'' = f2.
Jet jet_chain(const Jet& u, double f0, double f1, double f2);

/// Integer power by repeated multiplication (exact for jets, sign-safe).
Jet jet_pow_int(const Jet& a, long long k);

/// General power. Constant integer exponents use repeated multiplication so
/// that squared residual factors never hit ln-domain faults for negative
/// bases; anything else goes through exp/ln and requires a.v() > 0.
Jet jet_pow(const Jet& a, const Jet& b);

Jet jet_exp(const Jet& a);
Jet jet_ln(const Jet& a);
Jet jet_sqrt(const Jet& a);
Jet jet_sin(const Jet& a);
Jet jet_cos(const Jet& a);
Jet jet_sinh(const Jet& a);
Jet jet_cosh(const Jet& a);
Jet jet_tan(const Jet& a);
Jet jet_abs(const Jet& a);

/// Value plus the five first/second partials in (t, x); the carrier handed
/// to residual evaluation and reports.
struct Jet2 {
  double v = 0, d_t = 0, d_x = 0, d_tt = 0, d_tx = 0, d_xx = 0;
};

/// Value plus partials in (W, t, x); used by the implicit-function-theorem
/// reduction of root nodes.
struct Jet3 {
  double v = 0;
  double d_W = 0, d_t = 0, d_x = 0;
  double d_WW = 0, d_Wt = 0, d_Wx = 0, d_tt = 0, d_tx = 0, d_xx = 0;
};

/// Extraction from a generic jet whose axes 0,1 are (t, x).
Jet2 to_jet2(const Jet& j);
/// Extraction from a generic jet whose axes 0,1,2 are (W, t, x).
Jet3 to_jet3(const Jet& j);

}  // namespace pdexact

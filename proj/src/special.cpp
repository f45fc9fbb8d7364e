#include "pdexact/special.hpp"

#include <cmath>

namespace pdexact::special {

namespace {

constexpr double kInvE = 0.36787944117144232160;  // 1/e
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kEulerGamma = 0.57721566490153286061;

double halley_w(double w, double z) {
  // Halley steps on f(w) = w e^w - z.
  for (int it = 0; it < 60; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (std::abs(f) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    const double d1 = ew * (w + 1.0);
    const double step = f / (d1 - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

}  // namespace

double lambert_w(int branch, double z) {
  if (branch != 0 && branch != -1)
    throw EvalError(FaultKind::DomainError, "lambert_w: branch must be 0 or -1");
  // absorb rounding just below the branch point
  if (z < -kInvE) {
    if (z > -kInvE * (1.0 + 1e-12)) z = -kInvE;
    else throw EvalError(FaultKind::DomainError, "lambert_w: z below -1/e");
  }
  if (branch == 0) {
    if (z == 0.0) return 0.0;
    double w;
    if (z < -0.25) {
      const double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
      w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (z < 1.0) {
      w = z / (1.0 + z);
    } else {
      const double l = std::log(z);
      w = l - std::log(l > 1.0 ? l : 1.0);
    }
    w = halley_w(w, z);
    if (!std::isfinite(w) || std::abs(w * std::exp(w) - z) > 1e-13 * std::max(1.0, std::abs(z)))
      throw EvalError(FaultKind::ConvergenceFailure, "lambert_w: iteration stalled");
    return w;
  }
  // branch -1: defined on [-1/e, 0)
  if (z >= 0.0) throw EvalError(FaultKind::DomainError, "lambert_w(-1): z must be negative");
  double w;
  if (z < -0.25) {
    const double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
    w = -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p;
  } else {
    const double l = std::log(-z);
    w = l - std::log(-l);
  }
  w = halley_w(w, z);
  if (!std::isfinite(w) || w > -1.0 + 1e-8 ||
      std::abs(w * std::exp(w) - z) > 1e-13 * std::max(1.0, std::abs(z)))
    throw EvalError(FaultKind::ConvergenceFailure, "lambert_w(-1): iteration stalled");
  return w;
}

Deriv2 lambert_w_d2(int branch, double z) {
  const double w = lambert_w(branch, z);
  // W' = e^{-W}/(1+W); W'' = -W'^2 (2+W)/(1+W). Handles z = 0 (W' = 1).
  const double opw = 1.0 + w;
  if (std::abs(opw) < 1e-12)
    throw EvalError(FaultKind::DomainError, "lambert_w: derivative singular at branch point");
  const double d1 = std::exp(-w) / opw;
  const double d2 = -d1 * d1 * (2.0 + w) / opw;
  return {w, d1, d2};
}

double erf(double z) {
  const double az = std::abs(z);
  double result;
  if (az <= 2.5) {
    // Maclaurin series 2/sqrt(pi) * sum (-1)^n z^{2n+1} / (n! (2n+1))
    double term = az;
    double sum = az;
    const double zz = az * az;
    for (int n = 1; n < 200; ++n) {
      term *= -zz / n;
      const double add = term / (2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-17 * std::max(1.0, std::abs(sum))) break;
    }
    result = 2.0 / kSqrtPi * sum;
  } else if (az >= 7.0) {
    result = 1.0;
  } else {
    // erfc by Lentz continued fraction: erfc(z) = e^{-z^2}/sqrt(pi) * K
    // with K = 1/(z + (1/2)/(z + (2/2)/(z + (3/2)/(z + ...)))).
    double c = 1e-308, d = 0.0, h = 1e-308;
    for (int k = 0; k < 300; ++k) {
      const double a = k == 0 ? 1.0 : k / 2.0;
      const double b = az;
      d = b + a * d;
      if (d == 0.0) d = 1e-308;
      c = b + a / c;
      if (c == 0.0) c = 1e-308;
      d = 1.0 / d;
      const double delta = c * d;
      h *= delta;
      if (std::abs(delta - 1.0) < 1e-16) break;
    }
    result = 1.0 - std::exp(-az * az) / kSqrtPi * h;
  }
  return z < 0 ? -result : result;
}

Deriv2 erf_d2(double z) {
  const double g = 2.0 / kSqrtPi * std::exp(-z * z);
  return {erf(z), g, -2.0 * z * g};
}

double expint1(double z) {
  if (z <= 0.0) throw EvalError(FaultKind::DomainError, "expint1: z must be positive");
  if (z <= 1.0) {
    // E1(z) = -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 60; ++k) {
      term *= -z / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-17 * std::max(1.0, std::abs(sum))) break;
    }
    return -kEulerGamma - std::log(z) + sum;
  }
  // continued fraction E1(z) = e^{-z} / (z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...)))))
  double c = 1e-308, d = 0.0, h = 1e-308;
  for (int k = 0; k < 400; ++k) {
    double a, b;
    if (k == 0) {
      a = 1.0;
      b = z;
    } else if (k % 2 == 1) {
      a = static_cast<double>((k + 1) / 2);
      b = 1.0;
    } else {
      a = static_cast<double>(k / 2);
      b = z;
    }
    d = b + a * d;
    if (d == 0.0) d = 1e-308;
    c = b + a / c;
    if (c == 0.0) c = 1e-308;
    d = 1.0 / d;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-z) * h;
}

Deriv2 expint1_d2(double z) {
  const double e = std::exp(-z);
  return {expint1(z), -e / z, e * (z + 1.0) / (z * z)};
}

double kummer_m(double a, double b, double z) {
  if (b <= 0.0 && b == std::round(b))
    throw EvalError(FaultKind::DomainError, "kummer_m: b is a non-positive integer");
  // Kummer transformation keeps the series terms single-signed for z < 0.
  if (z < 0.0) return std::exp(z) * kummer_m(b - a, b, -z);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 500; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
  }
  throw EvalError(FaultKind::ConvergenceFailure, "kummer_m: series did not converge");
}

Deriv2 kummer_m_d2(double a, double b, double z) {
  // d/dz M(a,b,z) = (a/b) M(a+1,b+1,z)
  return {kummer_m(a, b, z), a / b * kummer_m(a + 1, b + 1, z),
          a * (a + 1) / (b * (b + 1)) * kummer_m(a + 2, b + 2, z)};
}

double whittaker_m(double kappa, double mu, double z) {
  if (z <= 0.0) throw EvalError(FaultKind::DomainError, "whittaker_m: z must be positive");
  return std::exp(-0.5 * z) * std::pow(z, mu + 0.5) * kummer_m(mu - kappa + 0.5, 1.0 + 2.0 * mu, z);
}

Deriv2 whittaker_m_d2(double kappa, double mu, double z) {
  if (z <= 0.0) throw EvalError(FaultKind::DomainError, "whittaker_m: z must be positive");
  const double p = mu + 0.5;
  // product of u = e^{-z/2}, v = z^p, m = M(mu-kappa+1/2, 1+2mu, z)
  const double u = std::exp(-0.5 * z);
  const double u1 = -0.5 * u, u2 = 0.25 * u;
  const double v = std::pow(z, p);
  const double v1 = p * v / z, v2 = p * (p - 1.0) * v / (z * z);
  const Deriv2 m = kummer_m_d2(mu - kappa + 0.5, 1.0 + 2.0 * mu, z);
  Deriv2 r;
  r.f = u * v * m.f;
  r.df = u1 * v * m.f + u * v1 * m.f + u * v * m.df;
  r.ddf = u2 * v * m.f + u * v2 * m.f + u * v * m.ddf +
          2.0 * (u1 * v1 * m.f + u1 * v * m.df + u * v1 * m.df);
  return r;
}

}  // namespace pdexact::special

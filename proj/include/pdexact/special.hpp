#pragma once

#include "pdexact/errors.hpp"

namespace pdexact::special {

/// Value together with the first two derivatives, the shape the jet chain
/// rule consumes.
struct Deriv2 {
  double f = 0, df = 0, ddf = 0;
};

/// Lambert W on the principal (branch = 0, z >= -1/e) or lower
/// (branch = -1, -1/e <= z < 0) branch. Halley iteration polished to
/// |W e^W - z| <= 1e-15 * max(1, |z|).
double lambert_w(int branch, double z);
Deriv2 lambert_w_d2(int branch, double z);

/// Error function, odd by construction, absolute error <= 1e-14.
double erf(double z);
Deriv2 erf_d2(double z);

/// Exponential integral E1(z) = int_1^inf exp(-z s)/s ds, z > 0.
/// Series below 1, continued fraction above.
double expint1(double z);
Deriv2 expint1_d2(double z);

/// Confluent hypergeometric M(a, b, z) by Maclaurin series with term-ratio
/// stopping; b must not be a non-positive integer. Supported region is the
/// moderate one the catalogue needs (|z| <= 30, |a|,|b| <= 10).
double kummer_m(double a, double b, double z);
Deriv2 kummer_m_d2(double a, double b, double z);

/// Whittaker M_{kappa,mu}(z) = exp(-z/2) z^{mu+1/2} M(mu-kappa+1/2, 1+2mu, z),
/// z > 0. The bridge formula is the only code path; there is no second series.
double whittaker_m(double kappa, double mu, double z);
Deriv2 whittaker_m_d2(double kappa, double mu, double z);

}  // namespace pdexact::special

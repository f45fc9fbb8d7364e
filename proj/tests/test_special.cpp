#include <doctest.h>

#include <cmath>

#include "pdexact/quad.hpp"
#include "pdexact/special.hpp"

using namespace pdexact;
namespace sp = pdexact::special;

TEST_CASE("lambert w known points") {
  CHECK(sp::lambert_w(0, 0.0) == 0.0);
  CHECK(sp::lambert_w(0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // bisection-derived reference for W(1) (omega constant)
  CHECK(sp::lambert_w(0, 1.0) == doctest::Approx(0.5671432904097838).epsilon(1e-12));
  CHECK(sp::lambert_w(-1, -std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("lambert w defining identity on log grids of both branches") {
  for (int i = 0; i < 50; ++i) {
    const double z = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
    const double w = sp::lambert_w(0, z);
    CHECK(std::abs(w * std::exp(w) - z) <= 1e-14 * std::max(1.0, std::abs(z)));
  }
  for (int i = 0; i < 50; ++i) {
    // z in (-1/e, 0): log-spaced magnitudes
    const double z = -std::exp(-1.0) * std::pow(10.0, -4.0 * (i + 1) / 50.0);
    const double w = sp::lambert_w(-1, z);
    CHECK(std::abs(w * std::exp(w) - z) <= 1e-14 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("lambert w derivative rule") {
  const auto d = sp::lambert_w_d2(0, 0.0);
  CHECK(d.df == doctest::Approx(1.0));  // explicit z -> 0 limit
  for (double z : {0.3, 1.0, 4.0}) {
    const auto a = sp::lambert_w_d2(0, z);
    const double h = 1e-6;
    const double fd = (sp::lambert_w(0, z + h) - sp::lambert_w(0, z - h)) / (2 * h);
    CHECK(a.df == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("erf basics") {
  CHECK(sp::erf(0.0) == 0.0);
  CHECK(sp::erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-13));
  for (double z : {0.1, 0.9, 2.0, 3.3, 5.0})
    CHECK(sp::erf(z) + sp::erf(-z) == 0.0);  // odd by construction
  // strictly monotone on a sample grid (saturates in doubles beyond ~6)
  double prev = -1.0;
  for (int i = 0; i <= 60; ++i) {
    const double v = sp::erf(-3.0 + 0.1 * i);
    CHECK(v > prev);
    prev = v;
  }
  for (int i = 0; i <= 30; ++i) CHECK(sp::erf(3.0 + 0.2 * i) >= sp::erf(2.9));
  CHECK(std::abs(sp::erf(6.0) - 1.0) < 1e-14);
}

TEST_CASE("expint1 against its defining integral") {
  CHECK(sp::expint1(1.0) == doctest::Approx(0.21938393439552029).epsilon(1e-12));
  for (double z : {0.5, 1.0, 2.0, 5.0}) {
    // direct quadrature of int_1^inf exp(-z s)/s ds, truncated where the
    // integrand underflows
    const double cut = std::max(2.0, 45.0 / z);
    quad::QuadConfig cfg;
    const Jet direct = quad::integrate(
        [z](double s) { return Jet::constant(0, std::exp(-z * s) / s); }, 1.0, cut, cfg);
    CHECK(sp::expint1(z) == doctest::Approx(direct.v()).epsilon(1e-10));
  }
  // integrand bound: E1(z) < exp(-z)/z
  for (double z : {1.0, 3.0, 10.0, 30.0}) CHECK(sp::expint1(z) < std::exp(-z) / z);
  CHECK_THROWS_AS(sp::expint1(0.0), EvalError);
  CHECK_THROWS_AS(sp::expint1(-1.0), EvalError);
}

TEST_CASE("kummer m series identities") {
  CHECK(sp::kummer_m(1.3, 2.7, 0.0) == 1.0);
  for (double z : {0.5, 1.0, 2.0})
    CHECK(sp::kummer_m(1.0, 2.0, z) == doctest::Approx((std::exp(z) - 1.0) / z).epsilon(1e-12));
  // M(1/2, 3/2, -z^2) = sqrt(pi)/2 erf(z)/z at z = 1
  const double lhs = sp::kummer_m(0.5, 1.5, -1.0);
  const double rhs = std::sqrt(M_PI) / 2.0 * sp::erf(1.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK_THROWS_AS(sp::kummer_m(1.0, 0.0, 1.0), EvalError);
  CHECK_THROWS_AS(sp::kummer_m(1.0, -2.0, 1.0), EvalError);
}

TEST_CASE("kummer derivative identity matches central differences") {
  for (double z : {0.5, 1.5, 4.0}) {
    const auto d = sp::kummer_m_d2(0.8, 2.3, z);
    const double h = 1e-5;
    const double fd = (sp::kummer_m(0.8, 2.3, z + h) - sp::kummer_m(0.8, 2.3, z - h)) / (2 * h);
    CHECK(d.df == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("whittaker bridge") {
  // M_{0,1/2}(z) = 2 sinh(z/2)
  CHECK(sp::whittaker_m(0.0, 0.5, 2.0) == doctest::Approx(2.0 * std::sinh(1.0)).epsilon(1e-10));
  for (double z : {0.5, 1.0, 3.0})
    CHECK(sp::whittaker_m(0.0, 0.5, z) ==
          doctest::Approx(2.0 * std::sinh(z / 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(sp::whittaker_m(0.0, 0.5, -1.0), EvalError);

  const auto d = sp::whittaker_m_d2(1.0, 1.0, 2.0);
  const double h = 1e-5;
  const double fd =
      (sp::whittaker_m(1.0, 1.0, 2.0 + h) - sp::whittaker_m(1.0, 1.0, 2.0 - h)) / (2 * h);
  CHECK(d.df == doctest::Approx(fd).epsilon(1e-8));
}

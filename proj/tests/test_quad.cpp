#include <doctest.h>

#include <cmath>

#include "pdexact/quad.hpp"
#include "pdexact/special.hpp"

using namespace pdexact;

TEST_CASE("polynomial and trig basics") {
  quad::QuadConfig cfg;
  const Jet a = quad::integrate([](double s) { return Jet::constant(0, s * s); }, 0, 1, cfg);
  CHECK(a.v() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  const Jet b = quad::integrate([](double s) { return Jet::constant(0, std::sin(s)); }, 0,
                                M_PI, cfg);
  CHECK(b.v() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("gaussian integral against the erf oracle") {
  quad::QuadConfig cfg;
  const Jet g = quad::integrate(
      [](double s) { return Jet::constant(0, std::exp(-s * s)); }, 0, 1, cfg);
  CHECK(g.v() == doctest::Approx(std::sqrt(M_PI) / 2.0 * special::erf(1.0)).epsilon(1e-12));
  CHECK(g.v() == doctest::Approx(0.7468241328124271).epsilon(1e-12));
}

TEST_CASE("componentwise integration of jets") {
  quad::QuadConfig cfg;
  // f(s) = (s^2, 2s, 3s^2) packed as value/d0/d1
  auto f = [](double s) {
    Jet j = Jet::constant(2, s * s);
    j.d(0) = 2 * s;
    j.d(1) = 3 * s * s;
    return j;
  };
  const Jet r = quad::integrate(f, 0, 2, cfg);
  CHECK(r.v() == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(r.d(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.d(1) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("additivity over split intervals") {
  quad::QuadConfig cfg;
  auto f = [](double s) { return Jet::constant(0, std::exp(-s) * std::sin(3 * s)); };
  const double whole = quad::integrate(f, 0, 4, cfg).v();
  const double split =
      quad::integrate(f, 0, 1.3, cfg).v() + quad::integrate(f, 1.3, 4, cfg).v();
  CHECK(whole == doctest::Approx(split).epsilon(1e-12));
  // orientation flip
  CHECK(quad::integrate(f, 4, 0, cfg).v() == doctest::Approx(-whole).epsilon(1e-12));
}

TEST_CASE("linearity") {
  quad::QuadConfig cfg;
  auto f = [](double s) { return Jet::constant(0, std::cos(2 * s)); };
  auto g = [](double s) { return Jet::constant(0, 1.0 / (1.0 + s * s)); };
  auto combo = [&](double s) { return jet_scale(f(s), 2.5) + jet_scale(g(s), -0.7); };
  const double lhs = quad::integrate(combo, 0, 3, cfg).v();
  const double rhs =
      2.5 * quad::integrate(f, 0, 3, cfg).v() - 0.7 * quad::integrate(g, 0, 3, cfg).v();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("tightening the subdivision cap only helps") {
  quad::QuadConfig coarse;
  coarse.max_subdivisions = 2000;
  quad::QuadConfig fine = coarse;
  fine.max_subdivisions = 4000;
  auto f = [](double s) { return Jet::constant(0, std::sqrt(std::abs(s - 0.3)) + s); };
  const double a = quad::integrate(f, 0, 1, coarse).v();
  const double b = quad::integrate(f, 0, 1, fine).v();
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("unmeetable budget reports the worst subinterval") {
  quad::QuadConfig cfg;
  cfg.max_subdivisions = 8;
  // oscillatory enough that 8 intervals cannot meet 1e-11
  auto f = [](double s) { return Jet::constant(0, std::sin(200.0 * s * s)); };
  CHECK_THROWS_AS(quad::integrate(f, 0, 3, cfg), EvalError);
}

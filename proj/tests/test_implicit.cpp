#include <doctest.h>

#include <cmath>

#include "pdexact/implicit.hpp"

using namespace pdexact;
namespace im = pdexact::implicit;

namespace {

im::RootConfig cfg;

}  // namespace

TEST_CASE("linear and cubic roots") {
  auto lin = [](double w) { return im::Probe{w - 2.0, 1.0}; };
  CHECK(im::solve_scalar(lin, 0, 5, cfg) == doctest::Approx(2.0).epsilon(1e-14));

  auto cubic = [](double w) { return im::Probe{w * w * w + w - 2.0, 3.0 * w * w + 1.0}; };
  CHECK(im::solve_scalar(cubic, 0, 2, cfg) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("omega equation") {
  auto g = [](double w) {
    const double e = std::exp(w);
    return im::Probe{w * e - 1.0, e * (w + 1.0)};
  };
  const double w = im::solve_scalar(g, 0, 1, cfg);
  CHECK(w == doctest::Approx(0.5671432904097838).epsilon(1e-13));
  CHECK(std::abs(w * std::exp(w) - 1.0) <= 1e-12);
}

TEST_CASE("warm start picks the nearby branch of a multi-root equation") {
  // g(w) = sin(w): roots at 0, pi, 2pi; bracket covers several
  auto g = [](double w) { return im::Probe{std::sin(w), std::cos(w)}; };
  const double near_pi = im::solve_scalar(g, -1.0, 7.5, cfg, 3.0);
  CHECK(near_pi == doctest::Approx(M_PI).epsilon(1e-12));
  const double near_2pi = im::solve_scalar(g, -1.0, 7.5, cfg, 6.2);
  CHECK(near_2pi == doctest::Approx(2 * M_PI).epsilon(1e-12));
}

TEST_CASE("no bracket and no warm start is an error") {
  auto g = [](double w) { return im::Probe{w * w + 1.0, 2.0 * w}; };
  CHECK_THROWS_AS(im::solve_scalar(g, -1, 1, cfg), EvalError);
}

TEST_CASE("interior sign changes are found even when endpoints agree") {
  // parabola dips below zero inside [-2, 2]
  auto g = [](double w) { return im::Probe{w * w - 1.0, 2.0 * w}; };
  const double w = im::solve_scalar(g, -2, 2, cfg);
  CHECK(std::abs(std::abs(w) - 1.0) <= 1e-12);
}

TEST_CASE("ift reduction reproduces hand algebra") {
  // G = W - t*x at (2,3): W = 6, W_t = 3, W_x = 2, W_tx = 1
  Jet g = Jet::constant(3, 0.0);  // axes (t, x, W)
  g.d(0) = -3.0;                  // dG/dt = -x
  g.d(1) = -2.0;                  // dG/dx = -t
  g.d(2) = 1.0;                   // dG/dW
  g.d2(0, 1) = g.d2(1, 0) = -1.0;
  const Jet w = im::ift_reduce(g, 6.0, cfg);
  CHECK(w.v() == 6.0);
  CHECK(w.d(0) == doctest::Approx(3.0));
  CHECK(w.d(1) == doctest::Approx(2.0));
  CHECK(w.d2(0, 1) == doctest::Approx(1.0));
  CHECK(w.d2(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("singular jacobian is detected") {
  Jet g = Jet::constant(2, 0.0);  // axes (t, W)
  g.d(0) = 1.0;
  g.d(1) = 1e-14;  // dG/dW below threshold
  CHECK_THROWS_AS(im::ift_reduce(g, 0.0, cfg), EvalError);
}

#include <doctest.h>

#include <cmath>

#include "pdexact/funcspace.hpp"

using namespace pdexact;
namespace fs = pdexact::funcspace;

TEST_CASE("sampling is deterministic in (slot, constraint, seed)") {
  fs::SlotConstraint none;
  const fs::SmoothFn a = fs::sample("F", none, 17);
  const fs::SmoothFn b = fs::sample("F", none, 17);
  CHECK(a.c == b.c);
  const fs::SmoothFn c = fs::sample("F", none, 18);
  CHECK(a.c != c.c);
  const fs::SmoothFn d = fs::sample("G", none, 17);  // independent stream per slot
  CHECK(a.c != d.c);
}

TEST_CASE("nonvanishing derivative guard is enforced by the sampler") {
  fs::SlotConstraint cons;
  fs::Guard g;
  g.kind = fs::GuardKind::NonvanishingDeriv;
  g.order = 1;
  g.min_abs = 0.1;
  g.z_lo = 0.6;
  g.z_hi = 1.4;
  cons.guards.push_back(g);
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const fs::SmoothFn f = fs::sample("F", cons, seed);
    for (int i = 0; i <= 200; ++i) {
      const double z = 0.6 + 0.8 * i / 200.0;
      CHECK(std::abs(f.eval(1, z)) >= 0.1);
    }
  }
}

TEST_CASE("compact support members vanish outside their bump") {
  fs::SlotConstraint cons;
  fs::Guard g;
  g.kind = fs::GuardKind::CompactSupport;
  g.radius = 8.0;
  cons.guards.push_back(g);
  const fs::SmoothFn f = fs::sample("F", cons, 3);
  CHECK(f.compact);
  CHECK(f.eval(0, -8.0) == 0.0);
  CHECK(f.eval(0, 8.0) == 0.0);
  CHECK(f.eval(0, f.center + f.radius) == 0.0);
  CHECK(f.eval(0, f.center + f.radius + 0.5) == 0.0);
  CHECK(f.eval(1, f.center + f.radius + 0.5) == 0.0);
  CHECK(f.eval(0, f.center) != 0.0);
  // support stays away from the origin (the superposition integrand has a
  // 1/omega factor)
  CHECK(std::abs(f.center) - f.radius >= 1.0);
}

TEST_CASE("constant members") {
  fs::SmoothFn f;
  f.c = {5.0, 0, 0, 0.5, 0, 0, 0};
  CHECK(f.eval(0, 1.7) == 5.0);
  CHECK(f.eval(1, 1.7) == 0.0);
  fs::SmoothFn lin;
  lin.c = {0.0, 1.0, 0, 0.5, 0, 0, 0};
  for (double z : {-2.0, 0.0, 3.0}) CHECK(lin.eval(1, z) == 1.0);
}

TEST_CASE("derivative orders 1..3 match finite differences of order 0") {
  fs::SlotConstraint none;
  for (std::uint64_t seed : {11, 12, 13}) {
    const fs::SmoothFn f = fs::sample("V", none, seed);
    for (double z : {0.7, 1.0, 1.3}) {
      const double h = 1e-5;
      const double d1 = (f.eval(0, z + h) - f.eval(0, z - h)) / (2 * h);
      const double d2 = (f.eval(0, z + h) - 2 * f.eval(0, z) + f.eval(0, z - h)) / (h * h);
      const double d3 =
          (f.eval(1, z + h) - 2 * f.eval(1, z) + f.eval(1, z - h)) / (h * h);
      CHECK(f.eval(1, z) == doctest::Approx(d1).epsilon(1e-8));
      CHECK(f.eval(2, z) == doctest::Approx(d2).epsilon(1e-5));
      CHECK(f.eval(3, z) == doctest::Approx(d3).epsilon(1e-5));
    }
  }
}

TEST_CASE("compact members match finite differences too") {
  fs::SlotConstraint cons;
  fs::Guard g;
  g.kind = fs::GuardKind::CompactSupport;
  g.radius = 8.0;
  cons.guards.push_back(g);
  const fs::SmoothFn f = fs::sample("G", cons, 5);
  for (double frac : {-0.6, -0.2, 0.1, 0.5}) {
    const double z = f.center + frac * f.radius;
    const double h = 1e-6;
    const double d1 = (f.eval(0, z + h) - f.eval(0, z - h)) / (2 * h);
    CHECK(f.eval(1, z) == doctest::Approx(d1).epsilon(1e-6));
    const double d2 = (f.eval(1, z + h) - f.eval(1, z - h)) / (2 * h);
    CHECK(f.eval(2, z) == doctest::Approx(d2).epsilon(1e-6));
  }
}

TEST_CASE("an unsatisfiable guard exhausts sampling") {
  fs::SlotConstraint cons;
  fs::Guard g;
  g.kind = fs::GuardKind::Positive;
  g.min = 1e6;  // family range tops out around 10
  g.z_lo = 0.0;
  g.z_hi = 1.0;
  cons.guards.push_back(g);
  CHECK_THROWS_AS(fs::sample("F", cons, 1), EvalError);
}

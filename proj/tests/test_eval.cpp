#include <doctest.h>

#include <cmath>

#include "pdexact/eval.hpp"

using namespace pdexact;

namespace {

struct Fixture {
  std::map<std::string, double> params;
  std::map<std::string, funcspace::SmoothFn> slots;
  WarmCache warm;
  EvalEnv env;

  Fixture() {
    env.params = &params;
    env.slots = &slots;
    env.warm = &warm;
  }

  Jet2 at(const ExprPtr& e, double t, double x) {
    env.t = t;
    env.x = x;
    return eval_expr(e, env);
  }
};

funcspace::SmoothFn identity_fn() {
  funcspace::SmoothFn f;
  f.c = {0, 1, 0, 0.5, 0, 0, 0};
  return f;
}

}  // namespace

TEST_CASE("polynomial jet at a point") {
  Fixture fx;
  const Jet2 j = fx.at(parse("t*x + x^2"), 2, 3);
  CHECK(j.v == doctest::Approx(15.0));
  CHECK(j.d_t == doctest::Approx(3.0));
  CHECK(j.d_x == doctest::Approx(8.0));
  CHECK(j.d_tx == doctest::Approx(1.0));
  CHECK(j.d_xx == doctest::Approx(2.0));
  CHECK(j.d_tt == doctest::Approx(0.0));
}

TEST_CASE("solution 2.3 with F(t)=t, G(x)=x matches its closed form") {
  Fixture fx;
  fx.slots["F"] = identity_fn();
  fx.slots["G"] = identity_fn();
  const ExprPtr sol = parse("(-0.5*int(u=0.5..t, F'(u)^2*exp(F(u))) + G(x))*exp(-F(t))");
  const double s0 = 0.5;
  for (double t : {0.7, 1.0, 1.35}) {
    for (double x : {0.4, 0.9}) {
      const Jet2 j = fx.at(sol, t, x);
      // w = (x - e^t/2 + e^{s0}/2) e^{-t}
      const double w = (x - 0.5 * std::exp(t) + 0.5 * std::exp(s0)) * std::exp(-t);
      const double wt = -0.5 - w;                       // d/dt
      const double wx = std::exp(-t);
      CHECK(j.v == doctest::Approx(w).epsilon(1e-12));
      CHECK(j.d_t == doctest::Approx(wt).epsilon(1e-12));
      CHECK(j.d_x == doctest::Approx(wx).epsilon(1e-12));
      CHECK(j.d_tx == doctest::Approx(-std::exp(-t)).epsilon(1e-12));
      CHECK(j.d_tt == doctest::Approx(0.5 + w).epsilon(1e-11));
      CHECK(j.d_xx == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("residual of 2.3 vanishes for the hand solution") {
  Fixture fx;
  fx.slots["F"] = identity_fn();
  fx.slots["G"] = identity_fn();
  const ExprPtr sol = parse("(-0.5*int(u=0.5..t, F'(u)^2*exp(F(u))) + G(x))*exp(-F(t))");
  const ExprPtr res = parse("(w_tx - w*w_x)^2 + (2*w_t - w^2)*w_x^2");
  const Jet2 wjet = fx.at(sol, 1.1, 0.8);
  const ResidualValue rv = residual_eval(*res, wjet, fx.env);
  CHECK(normalized_residual(rv) <= 1e-12);
  CHECK(rv.term_magnitudes.size() == 2);
}

TEST_CASE("trivial residual substitution") {
  Fixture fx;
  Jet2 wjet;
  wjet.d_tx = 1.7;
  wjet.d_t = 1.7;
  const ResidualValue rv = residual_eval(*parse("w_tx - w_t"), wjet, fx.env);
  CHECK(rv.value == 0.0);
}

TEST_CASE("fundamental theorem and Leibniz rule") {
  Fixture fx;
  const Jet2 a = fx.at(parse("int(u=0..t, u^2)"), 2, 1);
  CHECK(a.v == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(a.d_t == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(a.d_tt == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(a.d_x == doctest::Approx(0.0));

  const Jet2 b = fx.at(parse("int(u=0..t, sin(x*u))"), 1, 0);
  CHECK(b.v == doctest::Approx(0.0));
  CHECK(b.d_x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.d_t == doctest::Approx(0.0));
  CHECK(b.d_tx == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integral with constant limits reduces to plain quadrature") {
  Fixture fx;
  const Jet2 j = fx.at(parse("int(u=0..1, exp(-u^2))"), 1, 1);
  CHECK(j.v == doctest::Approx(0.7468241328124271).epsilon(1e-12));
  CHECK(j.d_t == 0.0);
  CHECK(j.d_tt == 0.0);
}

TEST_CASE("root node: product equation") {
  Fixture fx;
  const Jet2 j = fx.at(parse("root(W in [0, 10] : W - t*x ; W)"), 2, 3);
  CHECK(j.v == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(j.d_t == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(j.d_x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(j.d_tx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.d_tt == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("root node: cubic ift algebra at the origin") {
  Fixture fx;
  const Jet2 j = fx.at(parse("root(W in [-1, 1] : W^3 + W - t - x ; W)"), 0, 0);
  CHECK(j.v == doctest::Approx(0.0));
  CHECK(j.d_t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.d_x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.d_tx == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("root defining equation is satisfied to 1e-12") {
  Fixture fx;
  EvalStats stats;
  fx.env.stats = &stats;
  const ExprPtr e = parse("root(W in [0, 1.2] : W*exp(W) - t - x ; W)");
  const Jet2 j = fx.at(e, 0.6, 0.4);
  CHECK(j.v == doctest::Approx(0.5671432904097838).epsilon(1e-12));
  CHECK(stats.max_root_defect <= 1e-12);
}

TEST_CASE("degenerate inner root reduces nesting to a single level") {
  Fixture fx;
  // inner equation W - T: the integral of W over xi equals the integral of T
  const ExprPtr nested = parse(
      "root(T in [0.1, 4] : T - t - x ; int(xi=0..1, root(W in [-5, 5] : W - T ; W)))");
  const ExprPtr flat = parse("root(T in [0.1, 4] : T - t - x ; T)");
  const Jet2 a = fx.at(nested, 1.0, 0.7);
  const Jet2 b = fx.at(flat, 1.0, 0.7);
  CHECK(a.v == doctest::Approx(b.v).epsilon(1e-12));
  CHECK(a.d_t == doctest::Approx(b.d_t).epsilon(1e-11));
  CHECK(a.d_tx == doctest::Approx(b.d_tx).epsilon(1e-10));
  CHECK(a.d_xx == doctest::Approx(b.d_xx).epsilon(1e-10));
}

TEST_CASE("linearity of eval_expr") {
  Fixture fx;
  fx.slots["F"] = identity_fn();
  const ExprPtr e1 = parse("exp(t)*sin(x)");
  const ExprPtr e2 = parse("int(u=0..t, F(u)*cos(u*x))");
  const ExprPtr combo = parse("2.5*(exp(t)*sin(x)) - 0.7*int(u=0..t, F(u)*cos(u*x))");
  const Jet2 a = fx.at(e1, 1.2, 0.9);
  const Jet2 b = fx.at(e2, 1.2, 0.9);
  const Jet2 c = fx.at(combo, 1.2, 0.9);
  CHECK(c.v == doctest::Approx(2.5 * a.v - 0.7 * b.v).epsilon(1e-12));
  CHECK(c.d_t == doctest::Approx(2.5 * a.d_t - 0.7 * b.d_t).epsilon(1e-12));
  CHECK(c.d_x == doctest::Approx(2.5 * a.d_x - 0.7 * b.d_x).epsilon(1e-12));
  CHECK(c.d_tt == doctest::Approx(2.5 * a.d_tt - 0.7 * b.d_tt).epsilon(1e-12));
  CHECK(c.d_tx == doctest::Approx(2.5 * a.d_tx - 0.7 * b.d_tx).epsilon(1e-12));
  CHECK(c.d_xx == doctest::Approx(2.5 * a.d_xx - 0.7 * b.d_xx).epsilon(1e-12));
}

TEST_CASE("faults carry the source span") {
  Fixture fx;
  const ExprPtr e = parse("1/(t - 1)");
  fx.env.t = 1.0;
  fx.env.x = 0.5;
  try {
    eval_expr(e, fx.env);
    FAIL("expected a division fault");
  } catch (const EvalError& err) {
    CHECK(err.kind == FaultKind::DivisionByZero);
    CHECK(err.has_span);
  }
}

TEST_CASE("superposition pair matches direct truncated quadrature") {
  Fixture fx;
  funcspace::SlotConstraint cons;
  funcspace::Guard g;
  g.kind = funcspace::GuardKind::CompactSupport;
  g.radius = 8.0;
  cons.guards.push_back(g);
  const auto fn = funcspace::sample("F", cons, 9);
  const auto gn = funcspace::sample("G", cons, 9);
  fx.slots["F"] = fn;
  fx.slots["G"] = gn;
  const double a = 1.3, b = 0.7;
  fx.params["a"] = a;
  fx.params["b"] = b;

  const ExprPtr num = parse(
      "int(o=-inf..inf, F(o)*(a*b/o)*exp((a*b*t + o^2*x)/o) + G(o)*o*exp((a*b*x + o^2*t)/o))");
  const ExprPtr den = parse(
      "int(o=-inf..inf, F(o)*exp((a*b*t + o^2*x)/o) + G(o)*exp((a*b*x + o^2*t)/o))");

  const double t = 1.0, x = 0.5;
  fx.env.t = t;
  fx.env.x = x;
  const Jet2 w = integrate_superposition(*num, *den, fx.env);
  CHECK(std::isfinite(w.v));

  // oracle: plain scalar quadrature of each term over its own support
  quad::QuadConfig qc;
  auto piece = [&](const funcspace::SmoothFn& f, auto&& weight) {
    return quad::integrate(
               [&](double o) { return Jet::constant(0, f.eval(0, o) * weight(o)); },
               f.center - f.radius, f.center + f.radius, qc)
        .v();
  };
  auto wf = [&](double o) { return std::exp((a * b * t + o * o * x) / o); };
  auto wg = [&](double o) { return std::exp((a * b * x + o * o * t) / o); };
  const double n_direct = piece(fn, [&](double o) { return (a * b / o) * wf(o); }) +
                          piece(gn, [&](double o) { return o * wg(o); });
  const double d_direct = piece(fn, wf) + piece(gn, wg);
  CHECK(w.v == doctest::Approx(n_direct / d_direct).epsilon(1e-10));
}

TEST_CASE("value evaluation agrees with the jet value") {
  Fixture fx;
  fx.slots["F"] = identity_fn();
  const ExprPtr e = parse("int(u=0.5..t, F(u)*exp(u*x)) + root(W in [0,4] : W - t ; W^2)");
  fx.env.t = 1.2;
  fx.env.x = 0.8;
  const Jet2 j = eval_expr(e, fx.env);
  const double v = eval_value(e, fx.env);
  CHECK(v == doctest::Approx(j.v).epsilon(1e-13));
}

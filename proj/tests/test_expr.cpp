#include <doctest.h>

#include "pdexact/expr.hpp"

using namespace pdexact;

TEST_CASE("parses field variables and parameters with precedence") {
  const ExprPtr e = parse("w_t + a*w");
  REQUIRE(e->kind == NodeKind::Binary);
  CHECK(e->bop == BinaryOp::Add);
  CHECK(e->args[0]->kind == NodeKind::FieldVar);
  CHECK(e->args[0]->field == FieldKind::Wt);
  const Expr& mul = *e->args[1];
  REQUIRE(mul.kind == NodeKind::Binary);
  CHECK(mul.bop == BinaryOp::Mul);
  CHECK(mul.args[0]->kind == NodeKind::Param);
  CHECK(mul.args[0]->name == "a");
  CHECK(mul.args[1]->field == FieldKind::W);
}

TEST_CASE("primes become arbitrary-function derivative applications") {
  const ExprPtr e = parse("F'(t)*exp(-F(t))");
  REQUIRE(e->kind == NodeKind::Binary);
  const Expr& lhs = *e->args[0];
  CHECK(lhs.kind == NodeKind::ArbFn);
  CHECK(lhs.name == "F");
  CHECK(lhs.deriv == 1);
  CHECK(lhs.args[0]->kind == NodeKind::Var);
  const Expr& rhs = *e->args[1];
  REQUIRE(rhs.kind == NodeKind::Unary);
  CHECK(rhs.uop == UnaryOp::Exp);
  const Expr& neg = *rhs.args[0];
  REQUIRE(neg.kind == NodeKind::Unary);
  CHECK(neg.uop == UnaryOp::Neg);
  CHECK(neg.args[0]->kind == NodeKind::ArbFn);
  CHECK(neg.args[0]->deriv == 0);
}

TEST_CASE("the squared-residual transcription parses") {
  CHECK_NOTHROW(parse("(w_tx - w*w_x)^2 + (2*w_t - w^2)*w_x^2"));
}

TEST_CASE("power binds tighter than unary minus and associates right") {
  const ExprPtr e = parse("-a^2");
  REQUIRE(e->kind == NodeKind::Unary);
  CHECK(e->uop == UnaryOp::Neg);
  CHECK(e->args[0]->bop == BinaryOp::Pow);

  const ExprPtr r = parse("a^b^c");
  REQUIRE(r->bop == BinaryOp::Pow);
  CHECK(r->args[0]->kind == NodeKind::Param);
  CHECK(r->args[1]->bop == BinaryOp::Pow);
}

TEST_CASE("canonical printing") {
  CHECK(print(parse("1.5")) == "1.5");
  CHECK(print(parse("a*(t+x)")) == "a*(t + x)");
  CHECK(print(parse("int(u=0..t, F(u))")) == "int(u=0..t, F(u))");
}

TEST_CASE("print/parse round trip is structural identity") {
  const char* samples[] = {
      "w_t + a*w",
      "(w_tx - w*w_x)^2 + (2*w_t - w^2)*w_x^2",
      "-0.5*int(u=0.5..t, F'(u)^2*exp(F(u))) + G(x)",
      "root(W in [0, 5] : W*exp(W) - t - x ; W^2 + 1)",
      "a^-2 + (a^b)^c - -3",
      "lambertw0(t*x) + whitM(1, 0.5, t)",
      "int(o=-inf..inf, F(o)*exp(o*t))",
      "F''(t)/(F(t)*F'(t)^2)",
  };
  for (const char* s : samples) {
    const ExprPtr e = parse(s);
    const ExprPtr again = parse(print(e));
    CHECK_MESSAGE(equal(e, again), "round trip failed for: ", s);
  }
}

TEST_CASE("free names exclude bound dummies and unknowns") {
  CHECK(free_names(parse("a*w_t")) == std::set<std::string>{"a", "w_t"});
  CHECK(free_names(parse("int(u=0..t, F(u))")) == std::set<std::string>{"F"});
  // the 2.5-style residual
  const auto names = free_names(parse("w_tx - a*(w_t + w)^n + w_x"));
  CHECK(names == std::set<std::string>{"a", "n", "w_tx", "w_t", "w", "w_x"});
  CHECK(free_names(parse("root(W in [0, 1] : W - t ; W + s)")) ==
        std::set<std::string>{"s"});
}

TEST_CASE("syntax errors carry spans") {
  try {
    parse("a + (b");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.begin >= 6);
  }
  CHECK_THROWS_AS(parse("int(t=0..1, 2)"), ParseError);  // reserved binder
  CHECK_THROWS_AS(parse("F''''(t)"), ParseError);        // deriv order > 3
  CHECK_THROWS_AS(parse("1 + * 2"), ParseError);
  CHECK_THROWS_AS(parse("sin(a, b)"), ParseError);
  CHECK_THROWS_AS(parse("whitM(1)"), ParseError);
}

TEST_CASE("validation enforces declarations and field-variable rules") {
  const std::set<std::string> params{"a"};
  const std::set<std::string> slots{"F"};
  CHECK_NOTHROW(validate_expr(*parse("a*F(t)"), params, slots, false));
  CHECK_THROWS_AS(validate_expr(*parse("q*F(t)"), params, slots, false), UnboundNameError);
  CHECK_THROWS_AS(validate_expr(*parse("G(t)"), params, slots, false), UnboundNameError);
  CHECK_THROWS_AS(validate_expr(*parse("w_t"), params, slots, false), ParseError);
  CHECK_NOTHROW(validate_expr(*parse("w_t + a*w"), params, slots, true));
  CHECK_THROWS_AS(validate_expr(*parse("int(u=0..1, u) + w_t"), params, slots, true),
                  ParseError);
  // binder shadowing a declared parameter
  CHECK_THROWS_AS(validate_expr(*parse("int(a=0..1, a)"), params, slots, false),
                  UnboundNameError);
  // non-constant lower limit
  CHECK_THROWS_AS(validate_expr(*parse("int(u=t..1, u)"), params, slots, false), ParseError);
}

TEST_CASE("identical input yields identical trees") {
  const std::string src = "(w_tx - w*w_x)^2 + (2*w_t - w^2)*w_x^2";
  CHECK(equal(parse(src), parse(src)));
  CHECK(print(parse(src)) == print(parse(src)));
}

#include "sepalg/expr.hpp"

#include <doctest.h>

#include <random>

using namespace sepalg;

namespace {

const std::vector<std::string> kZ{"z1", "z2"};

Complex eval2(const Expr& e, Complex a, Complex b) {
  const Complex v[2] = {a, b};
  return evaluate(e, std::span<const Complex>(v, 2));
}

Expr var(const char* name, int slot) { return Expr::variable(name, slot); }

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const Expr e = parse("z1*z2 + 1", kZ);
  const Expr want = Expr::binary(Op::Add, Expr::binary(Op::Mul, var("z1", 0), var("z2", 1)), Expr::constant(1.0));
  CHECK(e == want);

  const Expr s = parse("sqrt(1 + z1*z2)", kZ);
  const Expr want_s = Expr::unary(
      Op::Sqrt, Expr::binary(Op::Add, Expr::constant(1.0), Expr::binary(Op::Mul, var("z1", 0), var("z2", 1))));
  CHECK(s == want_s);
}

TEST_CASE("parse precedence") {
  CHECK(parse("-z1^2", kZ) == Expr::unary(Op::Neg, Expr::power(var("z1", 0), 2)));
  CHECK(parse("z1 - z2 - 1", kZ) ==
        Expr::binary(Op::Sub, Expr::binary(Op::Sub, var("z1", 0), var("z2", 1)), Expr::constant(1.0)));
  CHECK(parse("z1 / z2 * z1", kZ) ==
        Expr::binary(Op::Mul, Expr::binary(Op::Div, var("z1", 0), var("z2", 1)), var("z1", 0)));
  CHECK(eval2(parse("2*z1^2+z2", kZ), 3.0, 1.0) == Complex(19.0, 0.0));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("z3", kZ), ParseError);
  CHECK_THROWS_AS(parse("2z1", kZ), ParseError);
  CHECK_THROWS_AS(parse("z1^-1", kZ), ParseError);
  CHECK_THROWS_AS(parse("z1^1.5", kZ), ParseError);
  CHECK_THROWS_AS(parse("z1^2^3", kZ), ParseError);
  CHECK_THROWS_AS(parse("(z1", kZ), ParseError);
  CHECK_THROWS_AS(parse("", kZ), ParseError);
  CHECK_THROWS_AS(parse("z1 +", kZ), ParseError);

  try {
    parse("z1 + $", kZ);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("complex literals") {
  const Expr e = parse("3+4i", {});
  CHECK(free_variables(e).empty());
  CHECK(evaluate(e, std::span<const Complex>{}) == Complex(3.0, 4.0));
  CHECK(evaluate(parse("i*i", {}), std::span<const Complex>{}) == Complex(-1.0, 0.0));
  CHECK(evaluate(parse("2.5e1 - 0.5i", {}), std::span<const Complex>{}) == Complex(25.0, -0.5));
}

TEST_CASE("evaluate examples") {
  CHECK(eval2(parse("z1*z2 + 1", kZ), 2.0, 3.0) == Complex(7.0, 0.0));

  const Expr s = parse("sqrt(x)", {"x"});
  const Complex got = evaluate(s, {{"x", Complex(-4.0, 0.0)}});
  CHECK(got.real() == doctest::Approx(0.0));
  CHECK(got.imag() == doctest::Approx(2.0));

  CHECK_THROWS_AS(eval2(parse("1/z1", kZ), 0.0, 1.0), EvalError);
  CHECK_THROWS_AS(evaluate(parse("z1", kZ), std::map<std::string, Complex>{}), EvalError);
}

TEST_CASE("free variables") {
  CHECK(free_variables(parse("z1*z2+1", kZ)) == std::set<std::string>{"z1", "z2"});
  CHECK(free_variables(parse("t^2 + c1*t", {"t", "c1"})) == std::set<std::string>{"t", "c1"});
  CHECK(free_variables(parse("exp(z2)", kZ)) == std::set<std::string>{"z2"});
}

TEST_CASE("render round trip") {
  const std::vector<std::string> vars{"z1", "z2", "t", "c1"};
  for (const char* src : {"z1*z2 + 1", "sqrt(1 + z1*z2)", "-z1^2 - (z2/3)^4", "exp(-t) * (c1 + 2.5i)",
                          "1 - (2 - 3)", "z1/(z2/t)", "-(-z1)", "((z1))^3 + 0.1"}) {
    const Expr e = parse(src, vars);
    CAPTURE(src);
    CHECK(parse(render(e), vars) == e);
  }
}

TEST_CASE("operators agree with direct complex arithmetic") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Expr add = parse("z1+z2", kZ), sub = parse("z1-z2", kZ), mul = parse("z1*z2", kZ),
             div = parse("z1/z2", kZ), pw = parse("z1^5", kZ), neg = parse("-z1", kZ), ex = parse("exp(z1)", kZ);
  for (int k = 0; k < 200; ++k) {
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    CHECK(std::abs(eval2(add, a, b) - (a + b)) <= 1e-15 * (1 + std::abs(a + b)));
    CHECK(std::abs(eval2(sub, a, b) - (a - b)) <= 1e-15 * (1 + std::abs(a - b)));
    CHECK(std::abs(eval2(mul, a, b) - a * b) <= 1e-15 * (1 + std::abs(a * b)));
    CHECK(std::abs(eval2(div, a, b) - a / b) <= 1e-14 * (1 + std::abs(a / b)));
    CHECK(std::abs(eval2(pw, a, b) - a * a * a * a * a) <= 1e-13 * (1 + std::abs(a * a * a * a * a)));
    CHECK(eval2(neg, a, b) == -a);
    CHECK(std::abs(eval2(ex, a, b) - std::exp(a)) <= 1e-14 * std::abs(std::exp(a)));
  }
}

TEST_CASE("principal sqrt squares back and keeps Re >= 0") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  int checked = 0;
  while (checked < 1000) {
    const Complex w(u(rng), u(rng));
    if (w.real() < 0 && std::abs(w.imag()) < 1e-3) continue;
    const Complex r = principal_sqrt(w);
    CHECK(std::abs(r * r - w) <= 1e-12 * std::abs(w));
    CHECK(r.real() >= 0.0);
    ++checked;
  }
  CHECK(principal_sqrt(Complex(-9.0, -0.0)) == Complex(0.0, 3.0));
  CHECK(principal_sqrt(Complex(0.0, 0.0)) == Complex(0.0, 0.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "schouten/expr.hpp"

using namespace schouten;

namespace {

VarBinding bind(std::initializer_list<std::pair<const char*, double>> vs) {
  VarBinding b;
  for (const auto& [name, value] : vs) b.set(name, value);
  return b;
}

// 8th-order central first derivative; the independent oracle for
// differentiate().
double fd_derivative(const Expr& e, const std::string& var,
                     const VarBinding& at, double h) {
  static const double c[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  double acc = 0.0;
  for (int k = 1; k <= 4; ++k) {
    VarBinding plus = at, minus = at;
    plus.set(var, at.get(var) + k * h);
    minus.set(var, at.get(var) - k * h);
    acc += c[k - 1] * (evaluate(e, plus) - evaluate(e, minus));
  }
  return acc / h;
}

// Random expression corpus (depth <= 5) over variables x, y.
Expr random_expr(std::mt19937_64& rng, int depth) {
  auto pick = [&](int m) { return static_cast<int>(rng() % m); };
  auto unit = [&] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
  };
  if (depth == 0 || pick(4) == 0) {
    switch (pick(3)) {
      case 0: return Expr::constant(unit());
      case 1: return Expr::variable("x");
      default: return Expr::variable("y");
    }
  }
  Expr a = random_expr(rng, depth - 1);
  Expr b = random_expr(rng, depth - 1);
  switch (pick(8)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    // Divisor offset away from 0 keeps the corpus within the domain.
    case 3: return a / (Expr::constant(2.5) + sin(b));
    case 4: return sin(a);
    case 5: return cos(a);
    case 6: return tanh(a);
    default: return pow(Expr::constant(1.5) + tanh(a), double(1 + pick(3)));
  }
}

}  // namespace

TEST_CASE("grammar cases parse to the expected trees") {
  Expr e = parse_expr("x^2/2");
  CHECK(e.kind() == ExprKind::Binary);
  CHECK(e.binary_op() == BinaryOp::Div);
  CHECK(e.lhs().binary_op() == BinaryOp::Pow);
  CHECK(evaluate(e, bind({{"x", 3.0}})) == doctest::Approx(4.5));

  Expr m = parse_expr("sin(x)*exp(y)");
  CHECK(m.binary_op() == BinaryOp::Mul);
  CHECK(m.lhs().unary_op() == UnaryOp::Sin);
  CHECK(m.rhs().unary_op() == UnaryOp::Exp);

  CHECK(evaluate(parse_expr("2*(3-1)*lam*x"),
                 bind({{"lam", 0.5}, {"x", 1.0}})) == doctest::Approx(2.0));
}

TEST_CASE("precedence and associativity") {
  VarBinding b = bind({{"x", 2.0}});
  CHECK(evaluate(parse_expr("-x^2"), b) == doctest::Approx(-4.0));
  CHECK(evaluate(parse_expr("2^-2"), b) == doctest::Approx(0.25));
  CHECK(evaluate(parse_expr("2^3^2"), b) == doctest::Approx(512.0));
  CHECK(evaluate(parse_expr("6/3/2"), b) == doctest::Approx(1.0));
  CHECK(evaluate(parse_expr("1-2-3"), b) == doctest::Approx(-4.0));
  CHECK(evaluate(parse_expr("1+2*3"), b) == doctest::Approx(7.0));
  CHECK(evaluate(parse_expr("-x*x"), b) == doctest::Approx(-4.0));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("   "), ParseError);
  CHECK_THROWS_AS(parse_expr("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse_expr("(x"), ParseError);
  CHECK_THROWS_AS(parse_expr("x +"), ParseError);
  CHECK_THROWS_AS(parse_expr("x ) y"), ParseError);
  try {
    parse_expr("1 + bar(2)");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("evaluation errors") {
  CHECK(evaluate(Expr::constant(7.0), VarBinding{}) == 7.0);
  CHECK_THROWS_AS(evaluate(parse_expr("x/(x-x)"), bind({{"x", 1.0}})),
                  DomainError);
  CHECK(evaluate(parse_expr("log(x)"), bind({{"x", std::exp(1.0)}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(evaluate(parse_expr("sqrt(x)"), bind({{"x", -1.0}})),
                  DomainError);
  CHECK_THROWS_AS(evaluate(parse_expr("log(x-1)"), bind({{"x", 0.5}})),
                  DomainError);
  CHECK_THROWS_AS(evaluate(Expr::variable("nope"), VarBinding{}), EvalError);
  try {
    evaluate(parse_expr("1/(x-1)"), bind({{"x", 1.0}}));
    CHECK(false);
  } catch (const DomainError& e) {
    CHECK(e.subexpression().find("x - 1") != std::string::npos);
  }
}

TEST_CASE("derivatives of the documented cases") {
  Expr e = parse_expr("x^2/2");
  Expr de = differentiate(e, "x");
  for (double x : {-1.5, 0.0, 0.3, 2.0})
    CHECK(evaluate(de, bind({{"x", x}})) == doctest::Approx(x).epsilon(1e-14));

  Expr m = parse_expr("sin(x)*exp(y)");
  Expr dm = differentiate(m, "x");
  VarBinding b = bind({{"x", 0.7}, {"y", -0.3}});
  CHECK(evaluate(dm, b) ==
        doctest::Approx(std::cos(0.7) * std::exp(-0.3)).epsilon(1e-14));

  CHECK(differentiate(Expr::constant(3.0), "x").is_constant(0.0));
  CHECK(differentiate(Expr::variable("x"), "x").is_constant(1.0));
  CHECK(differentiate(Expr::variable("y"), "x").is_constant(0.0));
}

TEST_CASE("4th derivative of exp(2x) at 0 equals 16 (nested FD oracle)") {
  Expr e = parse_expr("exp(2*x)");
  Expr d4 = e;
  for (int i = 0; i < 4; ++i) d4 = differentiate(d4, "x");
  double sym = evaluate(d4, bind({{"x", 0.0}}));
  CHECK(sym == doctest::Approx(16.0).epsilon(1e-12));

  // Oracle: the 8th-order first-derivative stencil nested four times on
  // the original function; independent of the symbolic path.
  const double h = 0.08;
  const double c[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  std::function<double(double, int)> nfd = [&](double x, int order) -> double {
    if (order == 0) return std::exp(2.0 * x);
    double acc = 0.0;
    for (int k = 1; k <= 4; ++k)
      acc += c[k - 1] * (nfd(x + k * h, order - 1) - nfd(x - k * h, order - 1));
    return acc / h;
  };
  double oracle = nfd(0.0, 4);
  CHECK(oracle == doctest::Approx(16.0).epsilon(1e-6));
  CHECK(sym == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("differentiate matches the FD oracle on a random corpus") {
  std::mt19937_64 rng(0x5EED);
  auto unit = [&] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 1.6 - 0.8;
  };
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 100; ++trial) {
    Expr e = random_expr(rng, 5);
    if (!e.depends_on("x")) continue;
    Expr de = differentiate(e, "x");
    VarBinding at = bind({{"x", unit()}, {"y", unit()}});
    double sym, fd;
    try {
      sym = evaluate(de, at);
      fd = fd_derivative(e, "x", at, 1e-2);
    } catch (const DomainError&) {
      continue;  // rare corpus draw outside a function domain
    }
    double scale = std::max({1.0, std::abs(sym), std::abs(fd)});
    CHECK(std::abs(sym - fd) / scale < 1e-6);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("derivative cache returns shared results") {
  Expr e = parse_expr("sin(x)*cos(x) + x^3");
  Expr d1 = differentiate(e, "x");
  Expr d2 = differentiate(e, "x");
  CHECK(same_node(d1, d2));
}

TEST_CASE("pow with a variable exponent cannot be differentiated") {
  CHECK_THROWS_AS(differentiate(parse_expr("x^y"), "x"), EvalError);
  // Constant-folded exponents are fine.
  Expr e = parse_expr("x^(3-1)");
  CHECK(evaluate(differentiate(e, "x"), bind({{"x", 5.0}})) ==
        doctest::Approx(10.0));
}

TEST_CASE("node budget aborts runaway derivatives") {
  std::size_t saved = node_budget();
  set_node_budget(200);
  // Iterated differentiation of nested products grows quickly.
  Expr e = parse_expr("sin(x*x)*cos(x*x)*exp(x*x)*sinh(x*x)*cosh(x*x)");
  CHECK_THROWS_AS(
      [&] {
        Expr d = e;
        for (int i = 0; i < 4; ++i) d = differentiate(d, "x");
        return d;
      }(),
      NodeBudgetError);
  set_node_budget(saved);
}

TEST_CASE("simplify folds the documented cases") {
  Expr e = simplify(parse_expr("0*sin(x)+y"));
  CHECK(e.kind() == ExprKind::Variable);
  CHECK(e.name() == "y");

  Expr one = parse_expr("1");
  Expr d4 = one;
  for (int i = 0; i < 4; ++i) d4 = differentiate(d4, "x");
  CHECK(simplify(d4).is_constant(0.0));

  CHECK(simplify(parse_expr("x*1 + 0/(1+y) - 0")).kind() ==
        ExprKind::Variable);
  CHECK(simplify(parse_expr("2*3 + 4")).is_constant(10.0));
}

TEST_CASE("printer round-trips every grammar production") {
  VarBinding b;
  b.set("x", 0.7);
  b.set("y", 1.3);
  b.set("z", 2.0);
  for (const char* src : {
           "-x^2", "x^-2", "2^3^2", "x/(y*z)", "x/y/z", "-(x + y)",
           "(x^2)^3", "sqrt(x) + log(y)", "1e-3*x - 2.5", "sinh(x)*cosh(y)",
           "exp(tanh(x))", "-(-x)", "x - (y - z)", "0.5*(x^2 + y^2)",
       }) {
    Expr e = parse_expr(src);
    double v0 = evaluate(e, b);
    double v1 = evaluate(parse_expr(to_string(e)), b);
    INFO(src << " printed as " << to_string(e));
    CHECK(std::abs(v1 - v0) <= 1e-12 * std::max(1.0, std::abs(v0)));
  }
  // Negative constants from folding print back parseably.
  Expr folded = simplify(parse_expr("1 - 3"));
  CHECK(folded.is_constant(-2.0));
  CHECK(evaluate(parse_expr(to_string(pow(folded, 2.0))), b) ==
        doctest::Approx(4.0));
}

TEST_CASE("derivative cache is safe under concurrent use") {
  std::vector<Expr> corpus;
  for (const char* src :
       {"sin(x)*exp(y) + x^3", "cos(x*y)/(2 + sinh(x))",
        "sqrt(1 + x^2)*tanh(y)", "log(2 + cos(x)) - y^4"})
    corpus.push_back(parse_expr(src));

  std::vector<std::thread> workers;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      VarBinding b;
      b.set("x", 0.3 + 0.1 * t);
      b.set("y", -0.2);
      for (int rep = 0; rep < 200; ++rep) {
        for (const Expr& e : corpus) {
          Expr dx = differentiate(e, "x");
          Expr dy = differentiate(e, "y");
          double ref = evaluate(dx, b) + evaluate(dy, b);
          if (!std::isfinite(ref)) ++mismatches;
          if (!same_node(dx, differentiate(e, "x"))) ++mismatches;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(mismatches == 0);
}

TEST_CASE("print/parse round trip and simplify preserve values") {
  std::mt19937_64 rng(0xC0FFEE);
  auto unit = [&] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 1.6 - 0.8;
  };
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 100; ++trial) {
    Expr e = random_expr(rng, 5);
    VarBinding at = bind({{"x", unit()}, {"y", unit()}});
    double v0;
    try {
      v0 = evaluate(e, at);
    } catch (const DomainError&) {
      continue;
    }
    double v1 = evaluate(parse_expr(to_string(e)), at);
    double v2 = evaluate(simplify(e), at);
    double scale = std::max(1.0, std::abs(v0));
    CHECK(std::abs(v1 - v0) / scale < 1e-12);
    CHECK(std::abs(v2 - v0) / scale < 1e-12);
    ++checked;
  }
  CHECK(checked == 100);
}

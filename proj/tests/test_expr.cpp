#include <gtest/gtest.h>

#include <cmath>

#include "oham/expr.hpp"

using namespace oham;

TEST(Expr, ParsesAndEvaluates) {
  const Expr e = parse_expr("2*x + y^2 - exp(-y)/3");
  EXPECT_NEAR(e.eval(0.5, 1.5), 1.0 + 2.25 - std::exp(-1.5) / 3.0, 1e-15);
}

TEST(Expr, UnaryMinusBindsWeakerThanPower) {
  EXPECT_DOUBLE_EQ(parse_expr("-2^2").eval(0, 0), -4.0);
  EXPECT_DOUBLE_EQ(parse_expr("(-2)^2").eval(0, 0), 4.0);
}

TEST(Expr, ParametersAndConstants) {
  const Expr e = parse_expr("sigma^2*y^n + pi", {{"sigma", 1.5}, {"n", 2.0}});
  EXPECT_NEAR(e.eval(0.0, 2.0), 2.25 * 4.0 + M_PI, 1e-14);
  EXPECT_NEAR(parse_expr("sqrt(x)").eval(0.25, 0.0), 0.5, 1e-16);
}

TEST(Expr, ConstantFolding) {
  EXPECT_TRUE(parse_expr("log(1/4)").is_constant());
  EXPECT_NEAR(parse_expr("log(1/4)").constant_value(), std::log(0.25), 1e-16);
  EXPECT_TRUE(parse_expr("0*y + 1").is_constant(1.0));
}

TEST(Expr, ParseErrorsCarryPosition) {
  try {
    parse_expr("x + * y", {}, 7);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7);
    EXPECT_EQ(e.column(), 5);
  }
  EXPECT_THROW(parse_expr("foo(x)"), ParseError);
  EXPECT_THROW(parse_expr("y^y"), ParseError);
  EXPECT_THROW(parse_expr("(x + 1"), ParseError);
  EXPECT_THROW(parse_expr("x 1"), ParseError);
}

TEST(Expr, DomainErrors) {
  EXPECT_THROW(parse_expr("log(y)").eval(0, -1.0), Error);
  EXPECT_THROW(parse_expr("1/y").eval(0, 0.0), Error);
  EXPECT_THROW(parse_expr("y^1.5").eval(0, -1.0), Error);
  EXPECT_DOUBLE_EQ(parse_expr("y^3").eval(0, -2.0), -8.0);
}

TEST(Expr, PrintedFormReparses) {
  for (const char* s : {"beta*(beta*x^beta*exp(2*y) - exp(y)*(alpha + beta - 1))", "n*y/(y + k)",
                        "delta*exp(y/(1 + epsilon*y))", "-3*y^-2 + log(x + 1)"}) {
    const Expr e = parse_expr(s, {{"alpha", 0.5}, {"beta", 1.0}, {"n", 0.7}, {"k", 0.03}, {"delta", 1.0}, {"epsilon", 5.0}});
    EXPECT_EQ(parse_expr(e.to_string()), e) << e.to_string();
  }
}

TEST(Expr, DerivativeMatchesFiniteDifferences) {
  const Expr f = parse_expr("exp(y/(1 + 5*y)) + x*y^3 - log(2 + y)/(1 + y^2)");
  const Expr d = derivative_y(f);
  for (double y : {0.1, 0.4, 1.3}) {
    const double h = 1e-5;
    const double fd = (f.eval(0.3, y + h) - f.eval(0.3, y - h)) / (2 * h);
    EXPECT_NEAR(d.eval(0.3, y), fd, 1e-8);
  }
  EXPECT_TRUE(derivative_y(parse_expr("x^2 + 3")).is_constant(0.0));
}

TEST(Expr, SharedEvaluationAgrees) {
  Expr f = parse_expr("y/(y + 0.03)");
  for (int k = 0; k < 5; ++k) f = derivative_y(f);
  EXPECT_NEAR(f.eval_shared(0.2, 0.7), f.eval(0.2, 0.7), 1e-9 * std::fabs(f.eval(0.2, 0.7)));
}

TEST(NonlinearityRule, ValueAndDerivative) {
  const NonlinearityRule r(parse_expr("y^2"));
  EXPECT_DOUBLE_EQ(r(0.0, 3.0), 9.0);
  EXPECT_DOUBLE_EQ(r.dy(0.0, 3.0), 6.0);
  EXPECT_EQ(r, NonlinearityRule(parse_expr("y^2")));
}

#include <doctest.h>

#include <cmath>

#include "osgs/expression.hpp"

using namespace osgs;

TEST_CASE("expression: arithmetic and precedence") {
  CHECK(Expression::parse("2+3*x^2")(2.0, 0.0) == doctest::Approx(14.0));
  CHECK(Expression::parse("1+2*3^2")(0.0, 0.0) == doctest::Approx(19.0));
  CHECK(Expression::parse("2^3^2")(0.0, 0.0) == doctest::Approx(512.0));  // right-assoc
  CHECK(Expression::parse("-x^2")(3.0, 0.0) == doctest::Approx(-9.0));
  CHECK(Expression::parse("2^-2")(0.0, 0.0) == doctest::Approx(0.25));
  CHECK(Expression::parse("(1+2)*(3-5)/4")(0.0, 0.0) == doctest::Approx(-1.5));
  CHECK(Expression::parse(" 1 - - 2 ")(0.0, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("expression: variables and functions") {
  CHECK(Expression::parse("x*y")(3.0, 7.0) == doctest::Approx(21.0));
  CHECK(Expression::parse("cos(pi*x/5)")(2.5, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(Expression::parse("exp(-(x-1)*100)")(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(Expression::parse("sin(pi/2)")(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(Expression::parse("20*y*(1-y)")(0.0, 0.5) == doctest::Approx(5.0));
}

TEST_CASE("expression: malformed input") {
  CHECK_THROWS_AS(Expression::parse("2+"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("foo(x)"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("2**3"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("1 2"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("(1+2"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("cos 3"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse(""), ExpressionError);
}

TEST_CASE("expression: text round-trip accessor") {
  const auto e = Expression::parse("x + y");
  CHECK(e.text() == "x + y");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include <Eigen/Dense>

#include "ffd/rational.hpp"

using ffd::BigInt;
using ffd::Rational;

TEST_CASE("arithmetic stays in lowest terms") {
  const Rational a(1, 6), b(1, 3);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(-1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(1, 2));
  CHECK(Rational(4, -8) == Rational(-1, 2));
  CHECK(Rational(4, -8).denominator() == 2);
  CHECK(-Rational(3, 5) == Rational(-3, 5));
  CHECK(abs(Rational(-7, 3)) == Rational(7, 3));
}

TEST_CASE("ordering and sign") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(0).sign() == 0);
  CHECK(Rational(-5, 7).sign() == -1);
  CHECK(Rational(0).is_zero());
}

TEST_CASE("division by zero is rejected") {
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rendering") {
  CHECK(Rational(16, 9).str() == "16/9");
  CHECK(Rational(-4).str() == "-4");
  CHECK(to_decimal(Rational(16, 9), 6) == "1.77778");
  CHECK(to_decimal(Rational(5, 36), 6) == "0.138889");
  CHECK(to_fixed(Rational(16, 9), 4) == "1.7778");
  CHECK(to_fixed(Rational(-1, 8), 2) == "-0.13");
  CHECK(to_fixed(Rational(1, 8), 2) == "0.13");
  CHECK(to_fixed(Rational(3), 2) == "3.00");
  std::ostringstream os;
  os << Rational(2, 3);
  CHECK(os.str() == "2/3");
}

TEST_CASE("parsing") {
  CHECK(ffd::parse_rational("3/4") == Rational(3, 4));
  CHECK(ffd::parse_rational("-6/8") == Rational(-3, 4));
  CHECK(ffd::parse_rational("12") == Rational(12));
  CHECK(ffd::parse_rational("0.25") == Rational(1, 4));
  CHECK(ffd::parse_rational("-1.5") == Rational(-3, 2));
  CHECK(ffd::parse_rational("0.08") == Rational(2, 25));
  CHECK(ffd::parse_rational("010") == Rational(10));
  CHECK(ffd::parse_rational("-09/3") == Rational(-3));
  CHECK_THROWS_AS(ffd::parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(ffd::parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(ffd::parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(ffd::parse_rational("1.2.3"), std::invalid_argument);
}

TEST_CASE("binomial") {
  CHECK(ffd::binomial(16, 12) == 1820);
  CHECK(ffd::binomial(32, 12) == BigInt("225792840"));
  CHECK(ffd::binomial(5, 0) == 1);
  CHECK(ffd::binomial(5, 7) == 0);
  CHECK(ffd::binomial(100, 50) == BigInt("100891344545564193334812497256"));
}

TEST_CASE("works as an Eigen scalar") {
  Eigen::Matrix<Rational, 2, 2> a;
  a << Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5);
  const Eigen::Matrix<Rational, 2, 2> p = a * a;
  CHECK(p(0, 0) == Rational(1, 4) + Rational(1, 12));
  CHECK(a.trace() == Rational(7, 10));
  CHECK(a.squaredNorm() == Rational(1, 4) + Rational(1, 9) + Rational(1, 16) + Rational(1, 25));
}

#include "doctest.h"

#include "bigbang/rational.hpp"
#include "bigbang/errors.hpp"

using bigbang::Rational;

TEST_CASE("normalize reduces and moves the sign to the numerator") {
  CHECK(bigbang::normalize(6, 9) == Rational(2, 3));
  CHECK(bigbang::normalize(3, -9).str() == "-1/3");
  const Rational z = bigbang::normalize(0, 5);
  CHECK(z.num() == 0);
  CHECK(z.den() == 1);
  CHECK_THROWS_AS(bigbang::normalize(1, 0), bigbang::RejectedInput);
}

TEST_CASE("canonical form survives arithmetic") {
  const Rational a(7, 3), b(-5, 6);
  for (const Rational& r : {a + b, a - b, a * b, a / b}) {
    CHECK(r.den() > 0);
    CHECK(boost::multiprecision::gcd(boost::multiprecision::abs(r.num()), r.den()) == 1);
  }
  CHECK(a + b == Rational(3, 2));
  CHECK(a * b == Rational(-35, 18));
  CHECK(a / b == Rational(-14, 5));
  CHECK_THROWS_AS(a / Rational(0), bigbang::DomainError);
}

TEST_CASE("parse accepts p/q and integers only") {
  CHECK(Rational::parse("7/3") == Rational(7, 3));
  CHECK(Rational::parse("-4/6") == Rational(-2, 3));
  CHECK(Rational::parse("2") == Rational(2));
  CHECK_THROWS_AS(Rational::parse("2.5"), bigbang::RejectedInput);
  CHECK_THROWS_AS(Rational::parse("1e3"), bigbang::RejectedInput);
  CHECK_THROWS_AS(Rational::parse(""), bigbang::RejectedInput);
  CHECK_THROWS_AS(Rational::parse("3/0"), bigbang::RejectedInput);
  CHECK_THROWS_AS(Rational::parse("1/-3"), bigbang::RejectedInput);
}

TEST_CASE("comparison is exact") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK((Rational(10, 10) <=> Rational(1)) == 0);
}

TEST_CASE("big values stay exact") {
  const Rational huge = Rational::parse("123456789012345678901234567890/7");
  CHECK(huge * Rational(7) == Rational::parse("123456789012345678901234567890"));
  CHECK(huge.to_double() == doctest::Approx(1.7636684144620811e28));
}

TEST_CASE("rationalize respects the denominator bound") {
  CHECK(bigbang::rationalize(0.5, 10) == Rational(1, 2));
  CHECK(bigbang::rationalize(2.0 / 3.0, 100) == Rational(2, 3));
  CHECK(bigbang::rationalize(3.14159265358979, 7) == Rational(22, 7));
  CHECK(bigbang::rationalize(-2.3333333333333335, 3) == Rational(-7, 3));
}

#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bigbang {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number p/q kept in canonical form: q > 0 and gcd(|p|, q) = 1.
/// Zero is 0/1. Every constructor and arithmetic operation re-normalizes.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt num, BigInt den);

  /// Parses "p/q" or "n" with an optional leading minus. Anything else
  /// (decimal points, exponents, whitespace, zero denominator) is rejected.
  static Rational parse(std::string_view text);

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_.sign(); }

  double to_double() const;
  long double to_long_double() const;

  /// Canonical text: "n" for integers, "p/q" otherwise.
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Builds the canonical rational num/den. Throws RejectedInput when den == 0.
Rational normalize(const BigInt& num, const BigInt& den);

Rational reciprocal(const Rational& r);

/// Best rational approximation of x with denominator at most max_den
/// (continued fractions). Floating values only become rationals through here,
/// with the caller choosing the bound explicitly.
Rational rationalize(double x, std::int64_t max_den);

}  // namespace bigbang

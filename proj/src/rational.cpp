#include "bigbang/rational.hpp"

#include <cmath>
#include <ostream>

#include "bigbang/errors.hpp"

namespace bigbang {

namespace {

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

Rational exact_value(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  const BigInt mant = static_cast<long long>(std::ldexp(m, 53));
  const int shift = e - 53;
  if (shift >= 0) return Rational(mant << shift, 1);
  return Rational(mant, BigInt(1) << -shift);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw RejectedInput("zero-denominator", "rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(abs_big(num_), den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num_text = body.substr(0, slash);
  std::string_view den_text = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text)) {
    throw RejectedInput("malformed-rational",
                        "expected an exact rational 'p/q' or integer, got '" + std::string(text) + "'");
  }
  BigInt num{std::string(num_text)};
  BigInt den{std::string(den_text)};
  if (negative) num = -num;
  return Rational(std::move(num), std::move(den));
}

double Rational::to_double() const { return static_cast<double>(to_long_double()); }

long double Rational::to_long_double() const {
  // Scale so that both parts fit a long double without overflow for huge inputs.
  using boost::multiprecision::msb;
  const BigInt an = abs_big(num_);
  if (an == 0) return 0.0L;
  long shift_n = static_cast<long>(msb(an)) - 100;
  long shift_d = static_cast<long>(msb(den_)) - 100;
  BigInt n = shift_n > 0 ? BigInt(an >> shift_n) : an;
  BigInt d = shift_d > 0 ? BigInt(den_ >> shift_d) : den_;
  long double v = n.convert_to<long double>() / d.convert_to<long double>();
  v = std::ldexp(v, static_cast<int>(std::max(shift_n, 0L) - std::max(shift_d, 0L)));
  return num_ < 0 ? -v : v;
}

std::string Rational::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  *this = Rational(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  *this = Rational(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  *this = Rational(num_ * rhs.num_, den_ * rhs.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw DomainError("division-by-zero", "rational division by zero");
  *this = Rational(num_ * rhs.den_, den_ * rhs.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const BigInt lhs = a.num_ * b.den_;
  const BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational normalize(const BigInt& num, const BigInt& den) { return Rational(num, den); }

Rational reciprocal(const Rational& r) { return Rational(1) / r; }

Rational rationalize(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw RejectedInput("non-finite", "cannot rationalize a non-finite value");
  if (std::fabs(x) > 1e18) throw RejectedInput("out-of-range", "value too large to rationalize");
  if (max_den < 1) throw RejectedInput("bad-bound", "denominator bound must be >= 1");
  // Convergents h/k of the continued fraction; stop before k exceeds the bound
  // and then consider the best semiconvergent.
  long double rest = x;
  BigInt h_prev = 1, h = static_cast<long long>(std::floor(rest));
  BigInt k_prev = 0, k = 1;
  rest -= std::floor(rest);
  const BigInt bound = max_den;
  for (int iter = 0; iter < 64 && rest > 1e-18L; ++iter) {
    rest = 1.0L / rest;
    const long double a_ld = std::floor(rest);
    rest -= a_ld;
    const BigInt a = static_cast<long long>(a_ld);
    const BigInt k_next = a * k + k_prev;
    if (k_next > bound) {
      const BigInt t = (bound - k_prev) / k;
      const Rational semi(t * h + h_prev, t * k + k_prev);
      const Rational conv(h, k);
      const Rational target = exact_value(x);
      auto dist = [&](const Rational& r) {
        Rational d = r - target;
        return d.sign() < 0 ? -d : d;
      };
      return (t > 0 && dist(semi) < dist(conv)) ? semi : conv;
    }
    const BigInt h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return Rational(h, k);
}

}  // namespace bigbang

#include "bigbang/regularity.hpp"

#include "bigbang/errors.hpp"

namespace bigbang {

ExponentTriple exponents_of(const Rational& w) {
  ExponentTriple e;
  if (w <= Rational(1)) {
    e.alpha = 4;
    e.beta = 2;
    e.gamma = Rational(1, 3);
  } else {
    e.alpha = Rational(3) * (Rational(1) + w) - Rational(2);
    e.beta = Rational(3, 2) * (Rational(1) + w) - Rational(1);
    e.gamma = reciprocal(Rational(1) + e.beta);
  }
  e.alpha_f = e.alpha.to_double();
  e.beta_f = e.beta.to_double();
  e.gamma_f = e.gamma.to_double();
  return e;
}

bool in_script_p(const BigInt& p, const BigInt& q) {
  if (p <= 0 || p >= q) return false;
  if (boost::multiprecision::gcd(p, q) != 1) return false;
  return (q & 1) == 1;
}

RegularityClass classify(const Rational& w) {
  RegularityClass c;
  c.w = w;
  c.gamma = exponents_of(w).gamma;
  if (w <= Rational(1)) {
    c.kind = RegularityKind::AlwaysRegularizable;
    c.p_parity = Parity::Odd;
    c.warn_below_minus_one = w < Rational(-1);
    c.reason = c.warn_below_minus_one ? "w<-1-outside-abs-w<=1" : "w<=1";
    return c;
  }
  const BigInt& p = c.gamma.num();
  const BigInt& q = c.gamma.den();
  if (in_script_p(p, q)) {
    c.kind = RegularityKind::BranchRegularizable;
    c.p_parity = (p & 1) == 0 ? Parity::Even : Parity::Odd;
    c.reason = "gamma-in-Qgamma";
  } else {
    c.kind = RegularityKind::NotBranchRegularizable;
    // gamma = 2/(3(1+w)) lies in (0, 1/3) and is canonical, so only q can fail.
    c.reason = (q & 1) == 0 ? "q-even" : "w>1-not-in-Qw";
  }
  return c;
}

Rational w_from_pq(const BigInt& p, const BigInt& q) {
  if (!in_script_p(p, q)) {
    throw RejectedInput("pq-not-in-set", "(" + p.str() + ", " + q.str() +
                                             ") is not a coprime pair 0 < p < q with q odd");
  }
  return Rational(2, 3) * Rational(q, p) - Rational(1);
}

bool block_regularizable_pure_power(const Rational& beta) {
  if (beta >= Rational(1)) return false;
  const Rational n = reciprocal(Rational(1) - beta);
  return n.is_integer() && n.sign() > 0;
}

std::string to_string(RegularityKind kind) {
  switch (kind) {
    case RegularityKind::AlwaysRegularizable: return "AlwaysRegularizable";
    case RegularityKind::BranchRegularizable: return "BranchRegularizable";
    case RegularityKind::NotBranchRegularizable: return "NotBranchRegularizable";
  }
  return "?";
}

std::string to_string(Parity parity) { return parity == Parity::Even ? "even" : "odd"; }

}  // namespace bigbang

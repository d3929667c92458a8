#pragma once

#include <optional>
#include <string>

#include "bigbang/rational.hpp"

namespace bigbang {

/// Exponents of the blow-up map a = r^gamma, P = r^(-beta*gamma) v.
/// Exact values drive all decisions; the floating copies feed the numerics.
struct ExponentTriple {
  Rational alpha;
  Rational beta;
  Rational gamma;
  double alpha_f = 0.0;
  double beta_f = 0.0;
  double gamma_f = 0.0;
};

/// w <= 1: (4, 2, 1/3). w > 1: alpha = 3(1+w) - 2, beta = alpha/2, gamma = 1/(1+beta).
ExponentTriple exponents_of(const Rational& w);

/// Membership of (p, q) in the set of coprime pairs 0 < p < q with q odd.
bool in_script_p(const BigInt& p, const BigInt& q);

enum class RegularityKind { AlwaysRegularizable, BranchRegularizable, NotBranchRegularizable };
enum class Parity { Even, Odd };

struct RegularityClass {
  RegularityKind kind = RegularityKind::NotBranchRegularizable;
  Rational w;
  Rational gamma;
  std::optional<Parity> p_parity;  // set unless NotBranchRegularizable
  std::string reason;
  // w < -1 sits outside |w| <= 1 although the regime split treats it like w <= 1.
  bool warn_below_minus_one = false;

  bool regularizable() const { return kind != RegularityKind::NotBranchRegularizable; }
};

RegularityClass classify(const Rational& w);

/// w = (2/3)(q/p) - 1. Throws RejectedInput unless (p, q) is in the set.
Rational w_from_pq(const BigInt& p, const BigInt& q);

/// beta = 1 - 1/n for a positive integer n.
bool block_regularizable_pure_power(const Rational& beta);

std::string to_string(RegularityKind kind);
std::string to_string(Parity parity);

}  // namespace bigbang

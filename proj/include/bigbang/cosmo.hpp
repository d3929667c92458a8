#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bigbang/errors.hpp"
#include "bigbang/rational.hpp"
#include "bigbang/regularity.hpp"

namespace bigbang {

inline constexpr double kPi = 3.14159265358979323846;

/// Physical inputs of the anisotropic Friedmann model. The default set has
/// 4*pi*G/3 = 1, sigma = 1, K = 0 and unit densities.
struct CosmologyParams {
  double sigma = 1.0;
  double curvature = 0.0;
  double newton_g = 3.0 / (4.0 * kPi);
  double rho_m = 1.0;
  double rho_rad = 1.0;
  double rho_w = 1.0;
  Rational w = 2;

  /// Throws RejectedInput when a positivity or finiteness requirement fails.
  void validate() const;
  double c_tilde() const { return 4.0 / 3.0 * kPi * newton_g; }
};

enum class Regime { WLessOne, WEqualOne, WGreaterOne };

Regime regime_of(const Rational& w);
std::string to_string(Regime r);

/// Contribution -coef * a^(-exponent) to a''.
struct ForceTerm {
  double coef = 0.0;
  Rational exponent;
  double exponent_f = 0.0;
  std::string source;
};

enum class PotentialShape { Power, Log };

/// Power: coef * a^(-exponent). Log: coef * ln(a).
struct PotentialTerm {
  double coef = 0.0;
  Rational exponent;
  double exponent_f = 0.0;
  PotentialShape shape = PotentialShape::Power;
};

/// A reduced coefficient next to the value printed for it in the closed-form
/// statement of the reduction.
struct CoefficientCheck {
  std::string name;
  double printed = 0.0;
  double derived = 0.0;
  bool agrees() const { return std::fabs(printed - derived) <= 1e-12 * std::max(1.0, std::fabs(derived)); }
};

/// Central-force system a'' = -lead * a^-(alpha+1) - sum(sub forces) in the
/// scaled time tau (t = time_scale * tau), with potential
/// V = (lead/alpha) a^-alpha + sum(potential_terms) and a'' = dV/da.
struct ReducedModel {
  Regime regime = Regime::WGreaterOne;
  Rational w;
  ExponentTriple exps;
  Rational kappa;
  double kappa_f = 0.0;
  double lead_coef = 0.0;
  std::vector<ForceTerm> sub_forces;
  std::vector<PotentialTerm> potential_terms;
  double time_scale = 1.0;
  double c_tilde = 0.0;
  double big_c = 0.0;
  std::vector<CoefficientCheck> printed_vs_derived;

  /// Only the dominant term, lead = alpha, unit time scale.
  static ReducedModel pure_power(const Rational& w);
  /// Every coefficient zero: free motion a(tau) = a0 + P0 tau.
  static ReducedModel free_motion(const Rational& w = 0);

  ReducedModel without_sub_forces() const;
  Rational lead_exponent() const { return exps.alpha + Rational(1); }
  /// lead / alpha; 1 for every model built by reduce().
  double lead_ratio() const { return lead_coef / exps.alpha_f; }
};

/// H^2 from the Friedmann equation.
double hubble_sq(double a, const CosmologyParams& params);

/// adot^2 - sigma^2/a^4 + K - (8 pi G/3)(rho_m/a + rho_rad/a^2 + rho_w/a^(3(1+w)-2)).
double constraint_residual(double a, double adot, const CosmologyParams& params);

/// Second-order equation for a(t) in physical time.
double full_accel(double a, const CosmologyParams& params);

/// Force term -> potential term with d/da(potential) = force.
PotentialTerm antiderivative(const ForceTerm& force);

ReducedModel reduce(const CosmologyParams& params);

double reduced_accel(const ReducedModel& model, double a);
double potential_value(const ReducedModel& model, double a);
double hamiltonian(const ReducedModel& model, double a, double p_mom);

/// Energy level h reached by every constraint-satisfying state: -(time_scale^2/2) K.
double physical_energy(const CosmologyParams& params, const ReducedModel& model);

/// Momentum of the scaled system for physical velocity adot: P = time_scale * adot.
inline double scaled_momentum(const ReducedModel& model, double adot) { return model.time_scale * adot; }

namespace detail {

inline void require_positive_a(double a) {
  if (!(a > 0.0)) throw DomainError("a-nonpositive", "scale factor must be strictly positive");
}

template <class Real>
Real accel(const ReducedModel& m, Real a) {
  using std::pow;
  Real acc = -Real(m.lead_coef) * pow(a, -Real(m.exps.alpha_f + 1.0));
  for (const auto& f : m.sub_forces) acc -= Real(f.coef) * pow(a, -Real(f.exponent_f));
  return acc;
}

template <class Real>
Real potential(const ReducedModel& m, Real a) {
  using std::log;
  using std::pow;
  Real v = Real(m.lead_ratio()) * pow(a, -Real(m.exps.alpha_f));
  for (const auto& t : m.potential_terms) {
    v += t.shape == PotentialShape::Log ? Real(t.coef) * log(a) : Real(t.coef) * pow(a, -Real(t.exponent_f));
  }
  return v;
}

}  // namespace detail

}  // namespace bigbang

#pragma once

#include <utility>
#include <vector>

#include "bigbang/cosmo.hpp"

namespace bigbang {

struct PhysState {
  double a = 1.0;
  double p_mom = 0.0;
  double tau = 0.0;
};

struct RegState {
  double r = 1.0;
  double v = 0.0;
  double s = 0.0;
};

/// coef * r^exponent, times ln(r) when with_log is set.
struct RTerm {
  double coef = 0.0;
  Rational exponent;
  double exponent_f = 0.0;
  bool with_log = false;
};

/// Energy level h and the two r-polynomials of the blown-up system:
/// G~ in v^2 - 2 = 2 h r^(alpha gamma) + G~(r), and G in dv/ds = beta(v^2 - 2) - G(r).
/// Both are derived term by term from the model's potential and force terms.
struct ManifoldSpec {
  double h = 0.0;
  std::vector<RTerm> g_tilde_terms;
  std::vector<RTerm> g_terms;
};

/// Throws DomainError if some exponent is not strictly positive.
ManifoldSpec manifold_spec(const ReducedModel& model, double h);

double g_tilde(const ManifoldSpec& spec, double r);
double g_field(const ManifoldSpec& spec, double r);

RegState to_regularized(const ReducedModel& model, const PhysState& state);
PhysState from_regularized(const ReducedModel& model, const RegState& reg);

double manifold_residual(const ReducedModel& model, double h, double r, double v);

/// (dr/ds, dv/ds). Accepts r = 0 exactly; r < 0 is a DomainError.
std::pair<double, double> regularized_field(const ReducedModel& model, double r, double v);

/// dtau/ds = r.
double s_rate(double r);

namespace detail {

inline void require_nonneg_r(double r) {
  if (!(r >= 0.0)) throw DomainError("r-negative", "regularized radius must be non-negative");
}

template <class Real>
Real eval_terms(const std::vector<RTerm>& terms, Real r) {
  using std::log;
  using std::pow;
  Real sum = 0;
  if (r == Real(0)) return sum;
  for (const auto& t : terms) {
    Real x = Real(t.coef) * pow(r, Real(t.exponent_f));
    if (t.with_log) x *= log(r);
    sum += x;
  }
  return sum;
}

}  // namespace detail

}  // namespace bigbang

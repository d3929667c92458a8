#include "bigbang/blowup.hpp"

#include <cmath>

namespace bigbang {

ManifoldSpec manifold_spec(const ReducedModel& model, double h) {
  const ExponentTriple& e = model.exps;
  const Rational alpha_gamma = e.alpha * e.gamma;
  ManifoldSpec spec;
  spec.h = h;

  // G~(r) = 2 r^(alpha gamma) f(r^gamma); a^-m becomes r^((alpha - m) gamma).
  for (const auto& t : model.potential_terms) {
    if (t.shape == PotentialShape::Log) {
      // coef ln(r^gamma) = coef gamma ln r
      spec.g_tilde_terms.push_back(
          RTerm{2.0 * t.coef * e.gamma_f, alpha_gamma, alpha_gamma.to_double(), true});
    } else {
      const Rational x = (e.alpha - t.exponent) * e.gamma;
      spec.g_tilde_terms.push_back(RTerm{2.0 * t.coef, x, x.to_double(), false});
    }
  }
  // G(r) = -r^(beta gamma + 1) f'(r^gamma); the force term c a^-e becomes
  // c r^(beta gamma + 1 - gamma e).
  const Rational base = e.beta * e.gamma + Rational(1);
  for (const auto& f : model.sub_forces) {
    const Rational x = base - e.gamma * f.exponent;
    spec.g_terms.push_back(RTerm{f.coef, x, x.to_double(), false});
  }

  for (const auto* terms : {&spec.g_tilde_terms, &spec.g_terms}) {
    for (const auto& t : *terms) {
      if (t.exponent.sign() <= 0) {
        throw DomainError("nonpositive-r-exponent",
                          "blown-up term with exponent " + t.exponent.str() + " would not vanish on N");
      }
    }
  }
  return spec;
}

double g_tilde(const ManifoldSpec& spec, double r) {
  detail::require_nonneg_r(r);
  return detail::eval_terms(spec.g_tilde_terms, r);
}

double g_field(const ManifoldSpec& spec, double r) {
  detail::require_nonneg_r(r);
  return detail::eval_terms(spec.g_terms, r);
}

RegState to_regularized(const ReducedModel& model, const PhysState& state) {
  detail::require_positive_a(state.a);
  const auto& e = model.exps;
  return RegState{std::pow(state.a, 1.0 / e.gamma_f), std::pow(state.a, e.beta_f) * state.p_mom, 0.0};
}

PhysState from_regularized(const ReducedModel& model, const RegState& reg) {
  if (reg.r == 0.0) {
    throw SingularChartError("collision-manifold", "r = 0 has no physical preimage");
  }
  detail::require_nonneg_r(reg.r);
  const auto& e = model.exps;
  return PhysState{std::pow(reg.r, e.gamma_f), std::pow(reg.r, -e.beta_f * e.gamma_f) * reg.v, 0.0};
}

double manifold_residual(const ReducedModel& model, double h, double r, double v) {
  detail::require_nonneg_r(r);
  const ManifoldSpec spec = manifold_spec(model, h);
  const double ag = model.exps.alpha_f * model.exps.gamma_f;
  const double rag = r == 0.0 ? 0.0 : std::pow(r, ag);
  const double vc = std::sqrt(2.0 * model.lead_ratio());
  return (v - vc) * (v + vc) - 2.0 * h * rag - detail::eval_terms(spec.g_tilde_terms, r);
}

std::pair<double, double> regularized_field(const ReducedModel& model, double r, double v) {
  detail::require_nonneg_r(r);
  const ManifoldSpec spec = manifold_spec(model, 0.0);
  const double beta = model.exps.beta_f;
  // (v - vc)(v + vc) is exactly zero at v = +-sqrt(2) as a double.
  const double vc = std::sqrt(2.0 * model.lead_ratio());
  return {(beta + 1.0) * r * v, beta * ((v - vc) * (v + vc)) - detail::eval_terms(spec.g_terms, r)};
}

double s_rate(double r) {
  if (!(r > 0.0)) throw DomainError("r-nonpositive", "time rescaling needs r > 0");
  return r;
}

}  // namespace bigbang

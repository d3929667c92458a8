#include "bigbang/cosmo.hpp"

#include <cmath>

namespace bigbang {

namespace {

void require_finite_positive(double x, const char* name) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw RejectedInput("param-not-positive", std::string(name) + " must be a finite positive number");
  }
}

ForceTerm make_force(double coef, const Rational& exponent, std::string source) {
  return ForceTerm{coef, exponent, exponent.to_double(), std::move(source)};
}

// 3(1+w) - 2, the exponent of the rho_w term in the constraint.
Rational rho_w_power(const Rational& w) { return Rational(3) * (Rational(1) + w) - Rational(2); }

}  // namespace

void CosmologyParams::validate() const {
  require_finite_positive(sigma, "sigma");
  require_finite_positive(newton_g, "G");
  require_finite_positive(rho_m, "rho_m");
  require_finite_positive(rho_rad, "rho_rad");
  require_finite_positive(rho_w, "rho_w");
  if (!std::isfinite(curvature)) throw RejectedInput("param-not-finite", "K must be finite");
}

Regime regime_of(const Rational& w) {
  const auto cmp = w <=> Rational(1);
  if (cmp < 0) return Regime::WLessOne;
  if (cmp == 0) return Regime::WEqualOne;
  return Regime::WGreaterOne;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::WLessOne: return "w<1";
    case Regime::WEqualOne: return "w=1";
    case Regime::WGreaterOne: return "w>1";
  }
  return "?";
}

double hubble_sq(double a, const CosmologyParams& p) {
  detail::require_positive_a(a);
  const double wp = 3.0 * (1.0 + p.w.to_double());
  return 8.0 * kPi * p.newton_g / 3.0 *
             (p.rho_m / std::pow(a, 3) + p.rho_rad / std::pow(a, 4) + p.rho_w / std::pow(a, wp)) -
         p.curvature / (a * a) + p.sigma * p.sigma / std::pow(a, 6);
}

double constraint_residual(double a, double adot, const CosmologyParams& p) {
  detail::require_positive_a(a);
  const double e = rho_w_power(p.w).to_double();
  return adot * adot - p.sigma * p.sigma / std::pow(a, 4) + p.curvature -
         8.0 * kPi * p.newton_g / 3.0 * (p.rho_m / a + p.rho_rad / (a * a) + p.rho_w / std::pow(a, e));
}

double full_accel(double a, const CosmologyParams& p) {
  detail::require_positive_a(a);
  const Rational k = rho_w_power(p.w);
  return -2.0 * p.sigma * p.sigma / std::pow(a, 5) -
         4.0 * kPi * p.newton_g / 3.0 *
             (p.rho_m / (a * a) + 2.0 * p.rho_rad / std::pow(a, 3) +
              p.rho_w * k.to_double() / std::pow(a, (k + Rational(1)).to_double()));
}

PotentialTerm antiderivative(const ForceTerm& force) {
  if (force.exponent == Rational(1)) {
    return PotentialTerm{-force.coef, Rational(0), 0.0, PotentialShape::Log};
  }
  const Rational e = force.exponent - Rational(1);
  return PotentialTerm{force.coef / e.to_double(), e, e.to_double(), PotentialShape::Power};
}

ReducedModel reduce(const CosmologyParams& params) {
  params.validate();
  const double ct = params.c_tilde();
  const double s2 = params.sigma * params.sigma;

  ReducedModel m;
  m.w = params.w;
  m.regime = regime_of(params.w);
  m.exps = exponents_of(params.w);
  m.lead_coef = m.exps.alpha_f;
  m.c_tilde = ct;
  m.big_c = 2.0 * s2 + 16.0 / 3.0 * kPi * params.newton_g * params.rho_w;

  switch (m.regime) {
    case Regime::WLessOne: m.kappa = Rational(3) * (Rational(1) - params.w); break;
    case Regime::WEqualOne: m.kappa = 0; break;
    case Regime::WGreaterOne: m.kappa = Rational(3) * (params.w - Rational(1)); break;
  }
  m.kappa_f = m.kappa.to_double();

  double lambda2 = 0.0;
  switch (m.regime) {
    case Regime::WLessOne: lambda2 = 2.0 / s2; break;
    case Regime::WEqualOne: lambda2 = 4.0 / m.big_c; break;
    case Regime::WGreaterOne: lambda2 = 1.0 / (ct * params.rho_w); break;
  }
  m.time_scale = std::sqrt(lambda2);

  // Each term of the physical acceleration, multiplied by lambda^2.
  const Rational k = rho_w_power(params.w);
  const ForceTerm sigma_force = make_force(lambda2 * 2.0 * s2, Rational(5), "sigma");
  const ForceTerm m_force = make_force(lambda2 * ct * params.rho_m, Rational(2), "rho_m");
  const ForceTerm rad_force = make_force(lambda2 * 2.0 * ct * params.rho_rad, Rational(3), "rho_rad");
  const ForceTerm w_force = make_force(lambda2 * ct * params.rho_w * k.to_double(), k + Rational(1), "rho_w");

  double lead_derived = 0.0;
  switch (m.regime) {
    case Regime::WLessOne:
      lead_derived = sigma_force.coef;
      m.sub_forces = {m_force, rad_force, w_force};
      break;
    case Regime::WEqualOne:
      lead_derived = sigma_force.coef + w_force.coef;
      m.sub_forces = {m_force, rad_force};
      break;
    case Regime::WGreaterOne:
      lead_derived = w_force.coef;
      m.sub_forces = {m_force, rad_force, sigma_force};
      break;
  }
  // lead = alpha holds identically after scaling; keep the exact value and
  // refuse anything that disagrees beyond rounding.
  if (std::fabs(lead_derived - m.lead_coef) > 1e-12 * m.lead_coef) {
    throw IntegrationFailure("reduction-inconsistent", "scaled leading coefficient differs from alpha");
  }
  const Rational lead_exp = m.lead_exponent();
  for (const auto& f : m.sub_forces) {
    if (!(f.exponent < lead_exp)) {
      throw IntegrationFailure("reduction-inconsistent", "sub-force exponent not below the dominant one");
    }
  }

  for (const auto& f : m.sub_forces) {
    if (f.source == "rho_w" && f.exponent == Rational(1)) {
      // kappa_1 = 4: the force vanishes and the potential keeps the constant
      // that matches the constraint, (lambda^2/2) * 2 c~ rho_w.
      m.potential_terms.push_back(PotentialTerm{lambda2 * ct * params.rho_w, Rational(0), 0.0, PotentialShape::Power});
    } else {
      m.potential_terms.push_back(antiderivative(f));
    }
  }

  auto check = [&](std::string name, double printed, std::size_t idx) {
    m.printed_vs_derived.push_back(CoefficientCheck{std::move(name), printed, m.sub_forces[idx].coef});
  };
  const double kappa = m.kappa_f;
  switch (m.regime) {
    case Regime::WLessOne:
      check("a1", 2.0 / s2 * ct * params.rho_m, 0);
      check("a2", 4.0 / s2 * ct * params.rho_rad, 1);
      check("a3", 2.0 / s2 * ct * (4.0 - kappa) * params.rho_w, 2);
      break;
    case Regime::WEqualOne:
      check("b1", 4.0 * ct / m.big_c * params.rho_m, 0);
      check("b2", 8.0 * ct / m.big_c * params.rho_rad, 1);
      break;
    case Regime::WGreaterOne:
      check("c1", params.rho_m / params.rho_w, 0);
      check("c2", 2.0 * params.rho_rad / params.rho_w, 1);
      check("c3", 2.0 * s2 / params.rho_w, 2);
      break;
  }
  return m;
}

ReducedModel ReducedModel::pure_power(const Rational& w) {
  ReducedModel m;
  m.w = w;
  m.regime = regime_of(w);
  m.exps = exponents_of(w);
  m.lead_coef = m.exps.alpha_f;
  switch (m.regime) {
    case Regime::WLessOne: m.kappa = Rational(3) * (Rational(1) - w); break;
    case Regime::WEqualOne: m.kappa = 0; break;
    case Regime::WGreaterOne: m.kappa = Rational(3) * (w - Rational(1)); break;
  }
  m.kappa_f = m.kappa.to_double();
  return m;
}

ReducedModel ReducedModel::free_motion(const Rational& w) {
  ReducedModel m = pure_power(w);
  m.lead_coef = 0.0;
  return m;
}

ReducedModel ReducedModel::without_sub_forces() const {
  ReducedModel m = *this;
  m.sub_forces.clear();
  m.potential_terms.clear();
  return m;
}

double reduced_accel(const ReducedModel& model, double a) {
  detail::require_positive_a(a);
  return detail::accel(model, a);
}

double potential_value(const ReducedModel& model, double a) {
  detail::require_positive_a(a);
  return detail::potential(model, a);
}

double hamiltonian(const ReducedModel& model, double a, double p_mom) {
  detail::require_positive_a(a);
  return 0.5 * p_mom * p_mom - detail::potential(model, a);
}

double physical_energy(const CosmologyParams& params, const ReducedModel& model) {
  // + 0.0 turns -0 into 0 for K = 0
  return -0.5 * model.time_scale * model.time_scale * params.curvature + 0.0;
}

}  // namespace bigbang

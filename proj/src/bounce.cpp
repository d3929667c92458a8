#include "bigbang/bounce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace bigbang {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ssr = 0.0;
  double sst = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.sst = syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    f.ssr += e * e;
  }
  return f;
}

bool usable(const Sample& s) { return s.a > 0 && std::isfinite(s.a) && std::isfinite(s.tau) && std::isfinite(s.p_mom); }

}  // namespace

AsymptoticForm asymptotic_form(const ReducedModel& model) {
  const ExponentTriple& e = model.exps;
  AsymptoticForm f;
  f.gamma = e.gamma;
  f.beta = e.beta;
  switch (model.regime) {
    case Regime::WLessOne:
      f.omega1 = e.alpha_f * e.gamma_f / 4.0;
      f.omega2 = model.kappa_f / 3.0;
      break;
    case Regime::WEqualOne:
      f.omega1 = 1.0 / 3.0;
      f.omega2 = 1.0;
      break;
    case Regime::WGreaterOne:
      f.omega1 = model.kappa_f * e.gamma_f;
      f.omega2 = e.gamma_f;
      break;
  }
  f.psi0 = std::pow(std::sqrt(2.0) * (e.beta_f + 1.0), e.gamma_f);
  return f;
}

double real_pow_rational(double x, const Rational& e) {
  const double ef = e.to_double();
  if (!(x < 0)) return std::pow(x, ef);
  if ((e.den() & 1) == 0) {
    throw ImaginaryBranchError("even-root-of-negative",
                               "x^(" + e.str() + ") has no real branch for x < 0 (even root index)");
  }
  const double mag = std::pow(-x, ef);
  return (e.num() & 1) == 0 ? mag : -mag;
}

double closed_form_zero_energy(const ExponentTriple& exps, double delta) {
  if (!(delta >= 0)) throw DomainError("negative-delta", "time to singularity must be non-negative");
  return std::pow(std::sqrt(2.0) * (exps.beta_f + 1.0) * delta, exps.gamma_f);
}

double leading_order(const AsymptoticForm& form, double tau) { return form.psi0 * real_pow_rational(tau, form.gamma); }

double time_to_singularity(const ReducedModel& model, double h, double a) {
  detail::require_positive_a(a);
  const ManifoldSpec spec = manifold_spec(model, h);
  const double beta = model.exps.beta_f;
  const double ag = model.exps.alpha_f * model.exps.gamma_f;
  const double r_end = std::pow(a, 1.0 / model.exps.gamma_f);
  const double two = 2.0 * model.lead_ratio();
  bool turned = false;
  auto integrand = [&](double r) {
    const double rad = two + 2.0 * h * std::pow(r, ag) + detail::eval_terms(spec.g_tilde_terms, r);
    if (!(rad > 0)) {
      turned = true;
      return 0.0;
    }
    return 1.0 / ((1.0 + beta) * std::sqrt(rad));
  };
  boost::math::quadrature::tanh_sinh<double> quad;
  const double t = quad.integrate(integrand, 0.0, r_end);
  if (turned) throw DomainError("turning-point", "the energy curve turns before reaching a = 0");
  return t;
}

FitResult fit_exponent(const Trajectory& traj, std::optional<FitWindow> window) {
  std::vector<const Sample*> pts;
  for (const auto& s : traj.samples) {
    if (usable(s)) pts.push_back(&s);
  }
  if (pts.size() < 2) throw InsufficientDataError("too-few-samples", "fit needs at least 8 samples");

  // The singularity lies beyond the end with the smaller scale factor.
  const bool end_is_last = pts.back()->a <= pts.front()->a;
  const Sample& end = end_is_last ? *pts.back() : *pts.front();
  const Sample& other = end_is_last ? *pts.front() : *pts.back();
  const double orient = end.tau >= other.tau ? 1.0 : -1.0;
  auto gap = [&](const Sample& s, double delta) { return delta + orient * (end.tau - s.tau); };

  // a / |P| = gap / gamma for a power law; two samples near the end give both.
  const Sample& near = end_is_last ? *pts[pts.size() - 2] : *pts[1];
  const double q_end = end.a / std::fabs(end.p_mom);
  const double q_near = near.a / std::fabs(near.p_mom);
  double delta0 = std::fabs(end.tau - near.tau) / std::fabs(q_near - q_end) * q_end;
  if (!std::isfinite(delta0) || !(delta0 > 0)) delta0 = std::max(std::fabs(end.tau - other.tau), 1e-300);

  std::vector<const Sample*> chosen;
  for (const Sample* s : pts) {
    const double g = gap(*s, delta0);
    if (!window || (g >= window->lo && g <= window->hi)) chosen.push_back(s);
  }
  if (chosen.size() < 8) {
    throw InsufficientDataError("too-few-samples", "fewer than 8 samples inside the fit window");
  }

  std::vector<double> x(chosen.size()), y(chosen.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) y[i] = std::log(chosen[i]->a);
  auto residual = [&](double delta) {
    for (std::size_t i = 0; i < chosen.size(); ++i) x[i] = std::log(gap(*chosen[i], delta));
    return fit_line(x, y);
  };

  // Golden-section search for the epoch.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = delta0 / 3.0, hi = delta0 * 3.0;
  const double tol = std::min(1e-12, 1e-9 * delta0);
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double fc = residual(c).ssr, fd = residual(d).ssr;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = residual(c).ssr;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = residual(d).ssr;
    }
  }
  const double delta = 0.5 * (lo + hi);
  const LineFit best = residual(delta);

  FitResult out;
  out.gamma_hat = best.slope;
  out.prefactor_hat = std::exp(best.intercept);
  out.r_squared = best.sst > 0 ? 1.0 - best.ssr / best.sst : 1.0;
  out.tau_star = end.tau + orient * delta;
  out.final_gap = delta;
  out.used = chosen.size();
  return out;
}

std::string to_string(SignRule rule) { return rule == SignRule::SameSign ? "same-sign" : "flipped"; }

BounceResult extend_through_singularity(const ReducedModel& model, const RegularityClass& cls,
                                        const Trajectory& pre, double match_tau) {
  if (!cls.regularizable()) {
    throw NoExtensionError("no-extension:" + cls.reason,
                           "w = " + cls.w.str() + " has gamma = " + cls.gamma.str() +
                               " outside the branch-regularizable set; no real continuation exists");
  }
  if (cls.gamma != model.exps.gamma) throw RejectedInput("class-model-mismatch", "classification is for another w");
  if (!(match_tau > 0) || !std::isfinite(match_tau)) throw RejectedInput("bad-match-tau", "match_tau must be positive");

  std::vector<const Sample*> pts;
  for (const auto& s : pre.samples) {
    if (usable(s)) pts.push_back(&s);
  }
  if (pts.size() < 2) throw InsufficientDataError("too-few-samples", "pre-bang branch is too short");
  if (!(pts.back()->a < pts.front()->a) || !(pts.back()->tau > pts.front()->tau)) {
    throw RejectedInput("pre-not-approaching", "pre-bang trajectory must run into a -> 0 with tau increasing");
  }

  const double h = pre.h_level;
  const Sample& last = *pts.back();
  const double t_last = time_to_singularity(model, h, last.a);
  const double tau_star = last.tau + t_last;

  const AsymptoticForm form = asymptotic_form(model);
  BounceResult out;
  out.w = cls.w;
  out.gamma = cls.gamma;
  out.psi0 = form.psi0;
  out.match_tau = match_tau;
  out.pre_tau_star = tau_star;
  out.sign_rule = *cls.p_parity == Parity::Even ? SignRule::SameSign : SignRule::Flipped;
  const double sign = out.sign_rule == SignRule::SameSign ? 1.0 : -1.0;

  // F1 continued through the real odd root, then the parity rule.
  const double f2_seed = sign * leading_order(form, -match_tau);
  if (!(f2_seed > 0)) throw FitQualityError("nonpositive-branch", "continued branch is not positive");
  out.continuity_gap = std::fabs(leading_order(form, 0.0) - sign * leading_order(form, -0.0));

  // Place the seed on the exact energy curve: momentum from H = h and time
  // from the quadrature, so only the scale factor comes from the leading order.
  const double t_seed = time_to_singularity(model, h, f2_seed);
  out.seed_deviation = std::fabs(t_seed / match_tau - 1.0);
  if (out.seed_deviation > 0.05) {
    throw FitQualityError("match-tau-outside-asymptotic-regime",
                          "leading order is off by " + std::to_string(out.seed_deviation) + " at match_tau");
  }
  const double extent = tau_star - pts.front()->tau;
  if (!(extent > t_seed)) throw FitQualityError("match-tau-too-large", "match_tau exceeds the pre-bang branch");
  out.seed_tau = -t_seed;

  const double p_seed = std::sqrt(2.0 * (h + detail::potential(model, f2_seed)));
  IntegratorOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-14;
  opts.stop_a_min.reset();
  opts.stop_time_span = extent - t_seed;
  opts.direction = Direction::AwayFromSingularity;
  opts.initial_step = 1e-3 * t_seed;
  opts.max_steps = 1000000;
  Trajectory post = integrate_physical(model, PhysState{f2_seed, p_seed, t_seed}, opts);

  const double vc = std::sqrt(2.0 * model.lead_ratio());
  // Pre branch: tau_out = tau* - tau, derivatives change sign.
  out.pre_branch = pre;
  out.pre_branch.samples.clear();
  for (const auto& s : pre.samples) {
    Sample q = s;
    q.tau = tau_star - s.tau;
    q.s = -s.s;
    q.p_mom = -s.p_mom;
    q.v = -s.v;
    out.pre_branch.samples.push_back(q);
  }
  out.pre_branch.samples.push_back(Sample{0.0, -kInf, 0.0, kInf, 0.0, vc, std::nan(""), 0.0});

  // Post branch: internal time u = -tau_out.
  out.post_branch = post;
  out.post_branch.samples.clear();
  out.post_branch.samples.push_back(Sample{0.0, -kInf, 0.0, -kInf, 0.0, -vc, std::nan(""), 0.0});
  for (const auto& s : post.samples) {
    Sample q = s;
    q.tau = -s.tau;
    q.s = -s.s;
    q.p_mom = -s.p_mom;
    q.v = -s.v;
    out.post_branch.samples.push_back(q);
  }

  auto fit_near = [](const Trajectory& t, double gap) {
    for (double widen : {10.0, 100.0, 1000.0}) {
      try {
        return fit_exponent(t, FitWindow{gap, widen * gap}).gamma_hat;
      } catch (const InsufficientDataError&) {
      }
    }
    return fit_exponent(t, std::nullopt).gamma_hat;
  };
  out.gamma_hat_pre = fit_near(out.pre_branch, t_last);
  out.gamma_hat_post = fit_near(out.post_branch, t_seed);
  return out;
}

}  // namespace bigbang

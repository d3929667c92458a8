#include "bigbang/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "bigbang/bounce.hpp"
#include "bigbang/pipeline.hpp"
#include "json.hpp"

namespace bigbang {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

CheckResult below(std::string name, double measured, double threshold, std::string detail = {}) {
  return CheckResult{std::move(name), measured < threshold, measured, threshold, std::move(detail)};
}

CosmologyParams with_w(CosmologyParams p, const Rational& w) {
  p.w = w;
  return p;
}

// Sub-forces on and h != 0.
CosmologyParams loaded(CosmologyParams p, const Rational& w) {
  p.w = w;
  if (p.curvature == 0.0) p.curvature = 0.5;
  return p;
}

double sup_rel_vs_physical(const Trajectory& phys, const Trajectory& reg, double a_lo) {
  double worst = 0;
  const double t_hi = phys.samples.back().tau;
  for (const auto& s : reg.samples) {
    if (s.a < a_lo || s.tau > t_hi) continue;
    const PhysState p = interpolate_at(phys, s.tau);
    worst = std::max(worst, std::fabs(p.a / s.a - 1.0));
  }
  return worst;
}

IntegratorOptions tight(double tol) {
  IntegratorOptions o;
  o.rel_tol = tol;
  o.abs_tol = 1e-15;
  o.max_steps = 5000000;
  return o;
}

void check_classification(std::vector<CheckResult>& out) {
  // Pairs with p/q >= 1/3 land on w <= 1, where the class is always 1/3.
  std::size_t bad = 0, seen = 0;
  for (long q = 3; q <= 99; q += 2) {
    for (long p = 1; p < q; ++p) {
      if (!in_script_p(p, q)) continue;
      ++seen;
      const RegularityClass c = classify(w_from_pq(p, q));
      const bool ok = 3 * p < q ? c.kind == RegularityKind::BranchRegularizable && c.gamma == Rational(p, q)
                                : c.kind == RegularityKind::AlwaysRegularizable && c.gamma == Rational(1, 3);
      if (!ok) ++bad;
    }
  }
  out.push_back(CheckResult{"qw-roundtrip", bad == 0, double(bad), 0.0,
                            std::to_string(seen) + " pairs with q <= 99"});

  bad = 0;
  for (long q = 3; q <= 33; q += 2) {
    for (long p = 1; p < q; ++p) {
      if (!in_script_p(p, q)) continue;
      const double v = real_pow_rational(-1.0, Rational(p, q));
      if ((v > 0) != (p % 2 == 0)) ++bad;
    }
  }
  out.push_back(CheckResult{"parity-law", bad == 0, double(bad), 0.0, "sign(-1)^(p/q) for q <= 33"});

  bool obstructed = false;
  try {
    real_pow_rational(-1.0, Rational(1, 4));
  } catch (const ImaginaryBranchError&) {
    obstructed = true;
  }
  const RegularityClass c53 = classify(Rational(5, 3));
  const bool ok = obstructed && c53.kind == RegularityKind::NotBranchRegularizable && c53.gamma == Rational(1, 4);
  out.push_back(CheckResult{"even-root-obstruction", ok, ok ? 0.0 : 1.0, 0.0, "w = 5/3, gamma = 1/4"});
}

void check_reduction(const VerifyOptions& o, std::vector<CheckResult>& out) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  double worst = 0, worst_constraint = 0;
  for (const auto& w : o.w_values) {
    for (int k = 0; k < 20; ++k) {
      CosmologyParams p;
      p.w = w;
      p.sigma = u(rng);
      p.curvature = u(rng) - 1.25;
      p.newton_g = u(rng) * 3.0 / (4.0 * kPi);
      p.rho_m = u(rng);
      p.rho_rad = u(rng);
      p.rho_w = u(rng);
      const ReducedModel m = reduce(p);
      const double lam2 = m.time_scale * m.time_scale;
      const double h = physical_energy(p, m);
      for (int i = 0; i < 100; ++i) {
        const double a = std::pow(10.0, -3.0 + 3.0 * i / 99.0);
        const double full = lam2 * full_accel(a, p);
        worst = std::max(worst, std::fabs(reduced_accel(m, a) / full - 1.0));
        const PhysState st = constraint_state(m, h, a, Direction::TowardSingularity);
        const double adot = st.p_mom / m.time_scale;
        worst_constraint = std::max(worst_constraint, std::fabs(constraint_residual(a, adot, p)) / (adot * adot));
      }
    }
  }
  out.push_back(below("reduction-equivalence", worst, 1e-12, "reduced accel vs time_scale^2 * full accel"));
  out.push_back(below("energy-level-constraint", worst_constraint, 1e-12, "H = h states satisfy the constraint"));
}

void check_printed_forms(const VerifyOptions& o, std::vector<CheckResult>& out) {
  // c3 with 4 pi G / 3 != 1 so that the printed and derived forms differ.
  CosmologyParams p = loaded(o.base, Rational(2));
  p.newton_g = 2.0 * 3.0 / (4.0 * kPi);
  const ReducedModel m = reduce(p);
  double printed = 0, derived = 0;
  for (const auto& c : m.printed_vs_derived) {
    if (c.name == "c3") {
      printed = c.printed;
      derived = c.derived;
    }
  }
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = std::pow(10.0, -3.0 + 3.0 * i / 99.0);
    worst = std::max(worst, std::fabs(reduced_accel(m, a) / (m.time_scale * m.time_scale * full_accel(a, p)) - 1.0));
  }
  out.push_back(below("derived-c3", worst, 1e-12,
                      "derived c3 = " + fmt(derived) + " reproduces the full force; printed form gives " + fmt(printed)));

  // G~ coefficients: the derived set conserves the residual, the half-size set does not.
  const CosmologyParams q = loaded(o.base, Rational(1, 2));
  const ReducedModel mq = reduce(q);
  const double h = physical_energy(q, mq);
  const Trajectory reg = approach_run(mq, h, 1.0, 1e-8);
  const ManifoldSpec spec = manifold_spec(mq, h);
  double half_worst = 0;
  for (const auto& s : reg.samples) half_worst = std::max(half_worst, std::fabs(s.m_residual + 0.5 * g_tilde(spec, s.r)));
  out.push_back(below("derived-g-tilde-factor", reg.max_m_residual, 1e-8,
                      "residual with half-size coefficients reaches " + fmt(half_worst)));

  // w > 1 G exponents: the regularized field must reproduce the physical flow.
  const CosmologyParams r = loaded(o.base, Rational(7, 3));
  const ReducedModel mr = reduce(r);
  const double hr = physical_energy(r, mr);
  IntegratorOptions po = tight(1e-13);
  po.stop_a_min = 0.02;
  const Trajectory phys = integrate_physical(mr, constraint_state(mr, hr, 1.0, Direction::TowardSingularity), po);
  IntegratorOptions ro = tight(1e-13);
  ro.stop_a_min.reset();
  ro.stop_r_min = std::pow(0.02, 1.0 / mr.exps.gamma_f);
  const Trajectory regr = integrate_regularized(
      mr, to_regularized(mr, constraint_state(mr, hr, 1.0, Direction::TowardSingularity)), hr, ro);
  std::string exps;
  for (const auto& t : manifold_spec(mr, hr).g_terms) exps += (exps.empty() ? "" : ",") + t.exponent.str();
  out.push_back(below("derived-g-exponents", sup_rel_vs_physical(phys, regr, 0.02), 1e-6,
                      "G exponents {" + exps + "} match the physical flow"));
}

void check_flows(const VerifyOptions& o, std::vector<CheckResult>& out) {
  double oracle = 0, drift = 0, resid = 0, charts = 0, corec = 0;
  for (const auto& w : o.w_values) {
    // Zero-energy pure power against the closed form.
    const ReducedModel pm = ReducedModel::pure_power(w);
    IntegratorOptions po = tight(1e-14);
    po.stop_a_min = 0.05;
    const Trajectory t0 = integrate_physical(pm, PhysState{1.0, -std::sqrt(2.0), 0.0}, po);
    const double d0 = 1.0 / (std::sqrt(2.0) * (pm.exps.beta_f + 1.0));
    for (const auto& s : t0.samples) {
      oracle = std::max(oracle, std::fabs(s.a / closed_form_zero_energy(pm.exps, d0 - s.tau) - 1.0));
      const PhysState back = from_regularized(pm, RegState{s.r, s.v, s.s});
      corec = std::max({corec, std::fabs(back.a / s.a - 1.0), std::fabs(back.p_mom / s.p_mom - 1.0)});
    }

    // Full model with K != 0.
    const CosmologyParams p = loaded(o.base, w);
    const ReducedModel m = reduce(p);
    const double h = physical_energy(p, m);
    const PhysState start = constraint_state(m, h, 1.0, Direction::TowardSingularity);
    IntegratorOptions qo = tight(1e-20);
    qo.abs_tol = 1e-20;
    qo.stop_a_min = 0.05;
    qo.precision = Precision::Quad;
    drift = std::max(drift, integrate_physical(m, start, qo).max_h_drift);

    IntegratorOptions ro = tight(1e-13);
    ro.stop_a_min.reset();
    ro.stop_r_min = std::pow(0.02, 1.0 / m.exps.gamma_f);
    const Trajectory reg = integrate_regularized(m, to_regularized(m, start), h, ro);
    resid = std::max(resid, reg.max_m_residual);

    IntegratorOptions co = tight(1e-13);
    co.stop_a_min = 0.02;
    charts = std::max(charts, sup_rel_vs_physical(integrate_physical(m, start, co), reg, 0.02));
  }
  out.push_back(below("zero-energy-oracle", oracle, 1e-8, "pure power, a from 1 to 0.05"));
  out.push_back(below("chart-corecording", corec, 1e-10, "co-recorded charts map onto each other"));
  out.push_back(below("hamiltonian-drift", drift, 1e-9, "binary128 run, K != 0, a from 1 to 0.05"));
  out.push_back(below("manifold-residual", resid, 1e-8, "regularized run, K != 0"));
  out.push_back(below("chart-equivalence", charts, 1e-6, "sup-relative a on [0.02, 1]"));
}

void check_collision(const VerifyOptions& o, std::vector<CheckResult>& out) {
  double worst = 0;
  for (const auto& w : o.w_values) {
    const ReducedModel m = reduce(with_w(o.base, w));
    for (double v : {std::sqrt(2.0), -std::sqrt(2.0)}) {
      const auto [dr, dv] = regularized_field(m, 0.0, v);
      worst = std::max({worst, std::fabs(dr), std::fabs(dv)});
    }
  }
  out.push_back(CheckResult{"collision-rest-points", worst == 0.0, worst, 0.0, "field at (0, +-sqrt(2))"});

  double s_min = INFINITY;
  for (const auto& w : o.w_values) {
    const ReducedModel m = ReducedModel::pure_power(w);
    IntegratorOptions ro = tight(1e-13);
    ro.stop_a_min.reset();
    ro.stop_r_min = 1e-10;
    const Trajectory t = integrate_regularized(m, RegState{1.0, -std::sqrt(2.0), 0.0}, 0.0, ro);
    s_min = std::min(s_min, std::fabs(t.samples.back().s));
  }
  out.push_back(CheckResult{"collision-approach-time", s_min > 50.0, s_min, 50.0,
                            "|s| when r first drops below 1e-10 (must exceed the threshold)"});
}

void check_exponents(const VerifyOptions& o, std::vector<CheckResult>& out) {
  double g_err = 0, pre_err = 0;
  for (const auto& w : o.w_values) {
    const CosmologyParams p = loaded(o.base, w);
    const ReducedModel m = reduce(p);
    const Trajectory t = approach_run(m, physical_energy(p, m), 1.0, 1e-10);
    const FitResult probe = fit_exponent(t, std::nullopt);
    const FitResult f = fit_exponent(t, FitWindow{probe.final_gap, 10.0 * probe.final_gap});
    g_err = std::max(g_err, std::fabs(f.gamma_hat - m.exps.gamma_f));
    pre_err = std::max(pre_err, std::fabs(f.prefactor_hat / asymptotic_form(m).psi0 - 1.0));
  }
  out.push_back(below("exponent-recovery", g_err, 1e-3, "fitted gamma, full models"));
  out.push_back(below("prefactor-recovery", pre_err, 1e-3, "fitted prefactor vs (sqrt(2)(beta+1))^gamma"));
}

void check_bounce(const VerifyOptions& o, std::vector<CheckResult>& out) {
  for (const Rational& w : {Rational(2), Rational(7, 3)}) {
    const CosmologyParams p = loaded(o.base, w);
    const ReducedModel m = reduce(p);
    const RegularityClass cls = classify(w);
    const Trajectory pre = approach_run(m, physical_energy(p, m), 1.0, 1e-10);
    const BounceResult b1 = extend_through_singularity(m, cls, pre, 1e-6);
    const BounceResult b2 = extend_through_singularity(m, cls, pre, 1e-5);
    const std::string tag = "bounce-w=" + w.str();
    out.push_back(CheckResult{tag + "-continuity", b1.continuity_gap <= 1e-12, b1.continuity_gap, 1e-12, ""});
    double amin = INFINITY;
    for (const auto& s : b1.post_branch.samples) {
      if (s.tau < 0) amin = std::min(amin, s.a);
    }
    out.push_back(CheckResult{tag + "-post-positive", amin > 0, amin, 0.0, "min a on tau < 0"});
    out.push_back(below(tag + "-post-exponent", std::fabs(b1.gamma_hat_post - m.exps.gamma_f), 1e-3,
                        "sign rule " + to_string(b1.sign_rule)));
    Trajectory other = b2.post_branch;
    other.samples.erase(other.samples.begin());
    double worst = 0;
    for (const auto& s : b1.post_branch.samples) {
      if (!(s.a > 0) || s.tau > other.samples.front().tau || s.tau < other.samples.back().tau) continue;
      worst = std::max(worst, std::fabs(interpolate_at(other, s.tau).a / s.a - 1.0));
    }
    out.push_back(below(tag + "-match-independence", worst, 1e-5, "match_tau 1e-6 vs 1e-5"));
  }
  std::string reason;
  try {
    run_bounce(with_w(o.base, Rational(5, 3)));
  } catch (const NoExtensionError& e) {
    reason = e.reason();
  }
  out.push_back(CheckResult{"bounce-w=5/3-obstruction", !reason.empty(), reason.empty() ? 1.0 : 0.0, 0.0,
                            reason.empty() ? "no obstruction raised" : reason});
}

}  // namespace

bool VerifyReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

VerifyReport run_verification(const VerifyOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport rep;
  using Group = std::function<void(std::vector<CheckResult>&)>;
  const std::vector<std::pair<std::string, Group>> groups = {
      {"classification", [&](auto& out) { check_classification(out); }},
      {"reduction", [&](auto& out) { check_reduction(opts, out); }},
      {"printed-forms", [&](auto& out) { check_printed_forms(opts, out); }},
      {"flows", [&](auto& out) { check_flows(opts, out); }},
      {"collision", [&](auto& out) { check_collision(opts, out); }},
      {"exponents", [&](auto& out) { check_exponents(opts, out); }},
      {"bounce", [&](auto& out) { check_bounce(opts, out); }},
  };
  for (const auto& [name, run] : groups) {
    try {
      run(rep.checks);
    } catch (const Error& e) {
      rep.checks.push_back(CheckResult{name + "-aborted", false, NAN, 0.0, e.reason() + ": " + e.what()});
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string to_json(const VerifyReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["passed"] = r.all_passed();
  ordered_json arr = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json o;
    o["name"] = c.name;
    o["passed"] = c.passed;
    o["measured"] = std::isfinite(c.measured) ? ordered_json(c.measured) : ordered_json(nullptr);
    o["threshold"] = c.threshold;
    o["detail"] = c.detail;
    arr.push_back(o);
  }
  j["checks"] = arr;
  return j.dump(2);
}

std::string to_table(const VerifyReport& r) {
  std::ostringstream os;
  std::size_t width = 4;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  for (const auto& c : r.checks) {
    os << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width) + 2) << c.name
       << std::setw(11) << fmt(c.measured) << "limit " << std::setw(9) << fmt(c.threshold) << c.detail << '\n';
  }
  std::size_t failed = 0;
  for (const auto& c : r.checks) failed += c.passed ? 0 : 1;
  os << (r.checks.size() - failed) << "/" << r.checks.size() << " checks passed in " << std::fixed
     << std::setprecision(1) << r.seconds << " s\n";
  return os.str();
}

}  // namespace bigbang

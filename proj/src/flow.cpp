#include "bigbang/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "bigbang/bounce.hpp"
#include <boost/multiprecision/float128.hpp>

#include "dopri5.hpp"

namespace bigbang {

namespace {

template <class Real>
using State3 = std::array<Real, 3>;
using Quad = boost::multiprecision::float128;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEventTol = 1e-12;

// Event function: positive before the stop, <= 0 once it is crossed.
struct Event {
  bool armed = false;
  std::size_t component = 0;
  double log_threshold = 0.0;
  template <class Real>
  double value(const State3<Real>& y) const {
    using std::log;
    return static_cast<double>(log(y[component])) - log_threshold;
  }
};

struct DriveResult {
  RunStatus status = RunStatus::ReachedStop;
  StepStats stats;
};

// Shared adaptive loop. Record is called for the initial state and every
// accepted step; the integration variable always increases.
template <class Real, class Rhs, class Record>
DriveResult drive(Rhs& rhs, State3<Real> y, const IntegratorOptions& opts, const State3<Real>& atol, Event event,
                  Record&& record) {
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  using std::sqrt;
  detail::Dopri5<3, Real> scheme(Real(opts.rel_tol), atol);
  DriveResult out;
  Real t = 0;
  State3<Real> f{};
  if (!rhs(t, y, f)) throw IntegrationFailure("non-finite-state", "field not finite at the initial state");
  ++out.stats.rhs_evals;
  record(t, y);

  event.armed = event.armed && event.value(y) > 0;
  const bool has_span = opts.stop_time_span.has_value();
  const Real t_end = has_span ? Real(*opts.stop_time_span) : std::numeric_limits<Real>::infinity();

  Real h = Real(opts.initial_step);
  if (!(h > 0)) {
    // Hairer's starting-step guess from the weighted sizes of y and f.
    Real d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const Real sc = atol[i] + Real(opts.rel_tol) * abs(y[i]);
      if (sc > 0) {
        d0 += (y[i] / sc) * (y[i] / sc);
        d1 += (f[i] / sc) * (f[i] / sc);
      }
    }
    h = (d0 > Real(1e-10) && d1 > Real(1e-10)) ? Real(0.01) * sqrt(d0 / d1) : Real(1e-6);
    if (!(h > 0) || !(h < std::numeric_limits<Real>::infinity())) h = Real(1e-3);
  }
  if (has_span) h = min(h, t_end);

  Real err_prev = Real(1e-4);
  bool rejected = false;
  auto counting_rhs = [&](Real tt, const State3<Real>& yy, State3<Real>& dy) {
    ++out.stats.rhs_evals;
    return rhs(tt, yy, dy);
  };
  auto note_step = [&](Real step) {
    const double hd = static_cast<double>(step);
    out.stats.min_step = out.stats.accepted == 1 ? hd : std::min(out.stats.min_step, hd);
    out.stats.max_step = std::max(out.stats.max_step, hd);
  };

  while (true) {
    if (out.stats.accepted >= opts.max_steps) {
      out.status = RunStatus::MaxSteps;
      return out;
    }
    bool last = false;
    if (has_span && t + h >= t_end) {
      h = t_end - t;
      last = true;
    }
    if (!(h > 16 * std::numeric_limits<Real>::epsilon() * max(Real(1), abs(t)))) {
      out.status = RunStatus::StepUnderflow;
      return out;
    }
    auto trial = scheme.step(counting_rhs, t, y, f, h);
    if (!trial.finite || trial.err > 1) {
      ++out.stats.rejected;
      h *= trial.finite ? max(Real(0.2), Real(0.9) * pow(trial.err, Real(-0.2))) : Real(0.25);
      rejected = true;
      continue;
    }

    if (event.armed && event.value(trial.y) <= 0) {
      // Bisect the step length until the event function is within tolerance.
      Real lo = 0, hi = h;
      auto best = trial;
      Real best_h = h;
      for (int it = 0; it < 200; ++it) {
        const Real mid = (lo + hi) / 2;
        if (!(mid > lo && mid < hi)) break;
        auto tr = scheme.step(counting_rhs, t, y, f, mid);
        if (!tr.finite) {
          hi = mid;
          continue;
        }
        const double g = event.value(tr.y);
        if (g > 0) {
          lo = mid;
        } else {
          hi = mid;
          best = tr;
          best_h = mid;
        }
        if (std::fabs(g) <= kEventTol) {
          best = tr;
          best_h = mid;
          break;
        }
      }
      t += best_h;
      y = best.y;
      ++out.stats.accepted;
      note_step(best_h);
      record(t, y);
      out.status = RunStatus::ReachedStop;
      return out;
    }

    t += h;
    y = trial.y;
    f = trial.f_end;
    ++out.stats.accepted;
    note_step(h);
    record(t, y);
    if (last) {
      out.status = RunStatus::ReachedTimeSpan;
      return out;
    }
    h *= scheme.next_factor(trial.err, err_prev, rejected);
    err_prev = max(trial.err, Real(1e-4));
    rejected = false;
  }
}

void finalize_drift(Trajectory& traj, const ReducedModel& model) {
  traj.max_h_drift = 0;
  traj.max_h_drift_scaled = 0;
  traj.max_m_residual = 0;
  for (const auto& s : traj.samples) {
    if (s.a > 0 && std::isfinite(s.p_mom)) {
      const double d = std::fabs(s.h_residual);
      traj.max_h_drift = std::max(traj.max_h_drift, d);
      traj.max_h_drift_scaled =
          std::max(traj.max_h_drift_scaled, d / energy_scale(model, traj.h_level, s.a, s.p_mom));
    }
    if (std::isfinite(s.m_residual)) traj.max_m_residual = std::max(traj.max_m_residual, std::fabs(s.m_residual));
  }
}

template <class Real>
bool finite3(const State3<Real>& y) {
  using std::isfinite;
  return isfinite(y[0]) && isfinite(y[1]) && isfinite(y[2]);
}

}  // namespace

void IntegratorOptions::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw RejectedInput("bad-tolerance", "tolerances must be positive");
  if (max_steps == 0) throw RejectedInput("bad-max-steps", "max_steps must be positive");
  if (!stop_a_min && !stop_r_min && !stop_time_span) {
    throw RejectedInput("no-stop-condition", "at least one stop condition is required");
  }
  if (stop_a_min && !(*stop_a_min > 0)) throw RejectedInput("bad-stop", "stop_a_min must be positive");
  if (stop_r_min && !(*stop_r_min >= 0)) throw RejectedInput("bad-stop", "stop_r_min must be non-negative");
  if (stop_time_span && !(*stop_time_span > 0)) throw RejectedInput("bad-stop", "stop_time_span must be positive");
}

double energy_scale(const ReducedModel& model, double h, double a, double p_mom) {
  return std::max({1.0, std::fabs(h), std::fabs(detail::potential(model, a)), 0.5 * p_mom * p_mom});
}

namespace {

template <class Real>
Trajectory physical_impl(const ReducedModel& model, const PhysState& init, const IntegratorOptions& opts) {
  using std::pow;
  using std::sqrt;
  const Real inv_gamma = Real(1) / Real(model.exps.gamma_f);
  const Real a0 = Real(init.a), p0 = Real(init.p_mom);
  const Real h = Real(0.5) * p0 * p0 - detail::potential<Real>(model, a0);
  const ManifoldSpec spec = manifold_spec(model, static_cast<double>(h));
  const Real ag = Real(model.exps.alpha_f) * Real(model.exps.gamma_f);
  const Real vc = sqrt(Real(2) * Real(model.lead_ratio()));
  const Real beta = Real(model.exps.beta_f);

  auto rhs = [&](Real, const State3<Real>& y, State3<Real>& dy) {
    if (!(y[0] > 0) || !finite3(y)) return false;
    dy[0] = y[1];
    dy[1] = detail::accel<Real>(model, y[0]);
    dy[2] = pow(y[0], -inv_gamma);
    return finite3(dy);
  };

  Trajectory traj;
  traj.chart = Chart::Physical;
  traj.h_level = static_cast<double>(h);
  Event event;
  if (opts.stop_a_min) event = Event{true, 0, std::log(*opts.stop_a_min)};

  auto record = [&](Real t, const State3<Real>& y) {
    const Real r = pow(y[0], inv_gamma);
    const Real v = pow(y[0], beta) * y[1];
    Sample s;
    s.tau = init.tau + static_cast<double>(t);
    s.a = static_cast<double>(y[0]);
    s.p_mom = static_cast<double>(y[1]);
    s.s = static_cast<double>(y[2]);
    s.r = static_cast<double>(r);
    s.v = static_cast<double>(v);
    s.h_residual = static_cast<double>(Real(0.5) * y[1] * y[1] - detail::potential<Real>(model, y[0]) - h);
    s.m_residual = static_cast<double>((v - vc) * (v + vc) - 2 * h * pow(r, ag) -
                                       detail::eval_terms<Real>(spec.g_tilde_terms, r));
    traj.samples.push_back(s);
  };

  // a > 0 throughout, so it is controlled relatively.
  const Real at = Real(opts.abs_tol);
  auto res = drive<Real>(rhs, State3<Real>{a0, p0, Real(0)}, opts, State3<Real>{Real(0), at, at}, event, record);
  traj.stats = res.stats;
  traj.status = res.status;
  finalize_drift(traj, model);
  return traj;
}

template <class Real>
Trajectory regularized_impl(const ReducedModel& model, const RegState& init, double h_level,
                            const IntegratorOptions& opts) {
  using std::pow;
  using std::sqrt;
  const ManifoldSpec spec = manifold_spec(model, h_level);
  const Real h = Real(h_level);
  const Real beta = Real(model.exps.beta_f);
  const Real gamma = Real(model.exps.gamma_f);
  const Real ag = Real(model.exps.alpha_f) * gamma;
  const Real vc = sqrt(Real(2) * Real(model.lead_ratio()));

  auto rhs = [&](Real, const State3<Real>& y, State3<Real>& dy) {
    if (!(y[0] >= 0) || !finite3(y)) return false;
    dy[0] = (beta + 1) * y[0] * y[1];
    dy[1] = beta * ((y[1] - vc) * (y[1] + vc)) - detail::eval_terms<Real>(spec.g_terms, y[0]);
    dy[2] = y[0];
    return finite3(dy);
  };

  Trajectory traj;
  traj.chart = Chart::Regularized;
  traj.h_level = h_level;
  Event event;
  if (opts.stop_r_min && *opts.stop_r_min > 0) event = Event{true, 0, std::log(*opts.stop_r_min)};

  auto record = [&](Real t, const State3<Real>& y) {
    if (y[0] < 0) throw IntegrationFailure("r-negative-excursion", "accepted step left r >= 0");
    const Real r = y[0], v = y[1];
    Sample s;
    s.s = init.s + static_cast<double>(t);
    s.r = static_cast<double>(r);
    s.v = static_cast<double>(v);
    s.tau = static_cast<double>(y[2]);
    if (r > 0) {
      const Real a = pow(r, gamma);
      const Real p = pow(r, -beta * gamma) * v;
      s.a = static_cast<double>(a);
      s.p_mom = static_cast<double>(p);
      s.h_residual = static_cast<double>(Real(0.5) * p * p - detail::potential<Real>(model, a) - h);
    } else {
      s.a = 0.0;
      s.p_mom = kNaN;
      s.h_residual = kNaN;
    }
    const Real rag = r > 0 ? Real(pow(r, ag)) : Real(0);
    s.m_residual =
        static_cast<double>((v - vc) * (v + vc) - 2 * h * rag - detail::eval_terms<Real>(spec.g_tilde_terms, r));
    traj.samples.push_back(s);
  };

  // r uses a purely relative tolerance so that accuracy holds as r -> 0.
  const Real at = Real(opts.abs_tol);
  auto res = drive<Real>(rhs, State3<Real>{Real(init.r), Real(init.v), Real(0)}, opts, State3<Real>{Real(0), at, at},
                         event, record);
  traj.stats = res.stats;
  traj.status = res.status;
  finalize_drift(traj, model);
  return traj;
}

}  // namespace

Trajectory integrate_physical(const ReducedModel& model, const PhysState& init, const IntegratorOptions& opts) {
  opts.validate();
  detail::require_positive_a(init.a);
  if (!std::isfinite(init.p_mom)) throw IntegrationFailure("non-finite-state", "initial momentum not finite");
  if (opts.direction == Direction::TowardSingularity && init.p_mom > 0) {
    throw RejectedInput("direction-mismatch", "P > 0 moves away from the singularity");
  }
  if (opts.direction == Direction::AwayFromSingularity && init.p_mom < 0) {
    throw RejectedInput("direction-mismatch", "P < 0 moves toward the singularity");
  }
  if (!opts.stop_a_min && !opts.stop_time_span) {
    throw RejectedInput("no-stop-condition", "physical chart needs stop_a_min or stop_time_span");
  }
  return opts.precision == Precision::Quad ? physical_impl<Quad>(model, init, opts)
                                           : physical_impl<double>(model, init, opts);
}

Trajectory integrate_regularized(const ReducedModel& model, const RegState& init, double h,
                                 const IntegratorOptions& opts) {
  opts.validate();
  detail::require_nonneg_r(init.r);
  if (!std::isfinite(init.v) || !std::isfinite(h)) throw IntegrationFailure("non-finite-state", "initial state not finite");
  const double vc = std::sqrt(2.0 * model.lead_ratio());
  if (init.r == 0.0 && std::fabs(init.v) != vc) {
    throw RejectedInput("off-collision-manifold", "a state with r = 0 must have v = +-sqrt(2)");
  }
  if (init.r > 0 && opts.direction == Direction::TowardSingularity && init.v > 0) {
    throw RejectedInput("direction-mismatch", "v > 0 moves away from the collision manifold");
  }
  if (init.r > 0 && opts.direction == Direction::AwayFromSingularity && init.v < 0) {
    throw RejectedInput("direction-mismatch", "v < 0 moves toward the collision manifold");
  }
  if (!opts.stop_r_min && !opts.stop_time_span) {
    throw RejectedInput("no-stop-condition", "regularized chart needs stop_r_min or stop_time_span");
  }
  return opts.precision == Precision::Quad ? regularized_impl<Quad>(model, init, h, opts)
                                           : regularized_impl<double>(model, init, h, opts);
}

PhysState interpolate_at(const Trajectory& traj, double tau) {
  const auto& s = traj.samples;
  if (s.size() < 2) throw InsufficientDataError("too-few-samples", "interpolation needs two samples");
  const bool increasing = s.back().tau > s.front().tau;
  auto before = [&](const Sample& x, double t) { return increasing ? x.tau < t : x.tau > t; };
  const double lo_t = increasing ? s.front().tau : s.back().tau;
  const double hi_t = increasing ? s.back().tau : s.front().tau;
  if (tau < lo_t || tau > hi_t) throw DomainError("outside-trajectory", "tau outside the recorded range");
  auto it = std::lower_bound(s.begin(), s.end(), tau, before);
  if (it == s.begin()) ++it;
  if (it == s.end()) --it;
  const Sample& q1 = *it;
  const Sample& q0 = *(it - 1);
  const double dt = q1.tau - q0.tau;
  const double x = (tau - q0.tau) / dt;
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  const double a = h00 * q0.a + h10 * dt * q0.p_mom + h01 * q1.a + h11 * dt * q1.p_mom;
  // derivative of the Hermite cubic
  const double d00 = 6 * x * x - 6 * x, d10 = 3 * x * x - 4 * x + 1, d01 = -6 * x * x + 6 * x, d11 = 3 * x * x - 2 * x;
  const double p = (d00 * q0.a + d01 * q1.a) / dt + d10 * q0.p_mom + d11 * q1.p_mom;
  return PhysState{a, p, tau};
}

DiagnosticsReport diagnostics_report(const Trajectory& traj, const ReducedModel& model) {
  if (traj.samples.empty()) throw InsufficientDataError("empty-trajectory", "no samples to diagnose");
  DiagnosticsReport rep;
  rep.samples = traj.samples.size();
  rep.stats = traj.stats;
  rep.status = traj.status;
  const double vc = std::sqrt(2.0 * model.lead_ratio());
  const ManifoldSpec spec = manifold_spec(model, traj.h_level);
  const double ag = model.exps.alpha_f * model.exps.gamma_f;
  for (const auto& s : traj.samples) {
    if (s.a > 0 && std::isfinite(s.p_mom)) {
      const double d = std::fabs(hamiltonian(model, s.a, s.p_mom) - traj.h_level);
      rep.max_h_drift = std::max(rep.max_h_drift, d);
      rep.max_h_drift_scaled =
          std::max(rep.max_h_drift_scaled, d / energy_scale(model, traj.h_level, s.a, s.p_mom));
    }
    const double rag = s.r > 0 ? std::pow(s.r, ag) : 0.0;
    const double m = (s.v - vc) * (s.v + vc) - 2.0 * traj.h_level * rag - g_tilde(spec, s.r);
    if (std::isfinite(m)) rep.max_m_residual = std::max(rep.max_m_residual, std::fabs(m));
  }

  // Local power law over the final decade of time-to-singularity.
  if (traj.samples.size() >= 8) {
    try {
      const FitResult probe = fit_exponent(traj, std::nullopt);
      const double lo = probe.final_gap;
      const FitResult fit = fit_exponent(traj, FitWindow{lo, 10.0 * lo});
      rep.fitted_exponent = fit.gamma_hat;
      rep.fit_r_squared = fit.r_squared;
    } catch (const Error& e) {
      rep.fit_note = e.reason();
    }
  } else {
    rep.fit_note = "too-few-samples";
  }
  return rep;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
  std::ostringstream line;
  os << "tau,s,a,P,r,v,H_residual,M_residual\n";
  for (const auto& s : traj.samples) {
    line.str("");
    line << std::setprecision(17) << s.tau << ',' << s.s << ',' << s.a << ',' << s.p_mom << ',' << s.r << ','
         << s.v << ',' << s.h_residual << ',' << s.m_residual << '\n';
    os << line.str();
  }
}

Trajectory read_csv(std::istream& is, Chart chart, double h_level) {
  Trajectory traj;
  traj.chart = chart;
  traj.h_level = h_level;
  std::string line;
  if (!std::getline(is, line) || line != "tau,s,a,P,r,v,H_residual,M_residual") {
    throw RejectedInput("bad-csv-header", "unexpected trajectory CSV header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<double, 8> v{};
    std::size_t pos = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t next = line.find(',', pos);
      const std::string cell = line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      v[i] = std::strtod(cell.c_str(), nullptr);
      if (next == std::string::npos && i + 1 < v.size()) throw RejectedInput("bad-csv-row", "short CSV row");
      pos = next + 1;
    }
    traj.samples.push_back(Sample{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
  }
  return traj;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ReachedStop: return "reached-stop";
    case RunStatus::ReachedTimeSpan: return "reached-time-span";
    case RunStatus::StepUnderflow: return "step-underflow";
    case RunStatus::MaxSteps: return "max-steps";
  }
  return "?";
}

std::string to_string(Chart c) { return c == Chart::Physical ? "physical" : "regularized"; }

}  // namespace bigbang

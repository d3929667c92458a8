#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bigbang/blowup.hpp"
#include "bigbang/cosmo.hpp"

namespace bigbang {

enum class Direction { TowardSingularity, AwayFromSingularity };
enum class Chart { Physical, Regularized };
/// Quad carries the state in binary128; roughly 30x slower than Double.
enum class Precision { Double, Quad };

/// At least one stop condition must be set. stop_a_min only applies to the
/// physical chart and stop_r_min only to the regularized one.
struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 200000;
  std::optional<double> stop_a_min = 1e-3;
  std::optional<double> stop_r_min;
  std::optional<double> stop_time_span;
  Direction direction = Direction::TowardSingularity;
  double initial_step = 0.0;  // 0 picks one automatically
  Precision precision = Precision::Double;

  void validate() const;
};

enum class RunStatus { ReachedStop, ReachedTimeSpan, StepUnderflow, MaxSteps };

/// One accepted step. Both charts are co-recorded; values that do not exist
/// in a chart (P on the collision manifold) are NaN.
struct Sample {
  double tau = 0.0;
  double s = 0.0;
  double a = 0.0;
  double p_mom = 0.0;
  double r = 0.0;
  double v = 0.0;
  double h_residual = 0.0;  // H(a, P) - h_level
  double m_residual = 0.0;  // manifold residual at (r, v)
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

struct Trajectory {
  Chart chart = Chart::Physical;
  std::vector<Sample> samples;
  double h_level = 0.0;
  double max_h_drift = 0.0;         // max |H - h|
  double max_h_drift_scaled = 0.0;  // max |H - h| / max(1, |h|, |V|, P^2/2)
  double max_m_residual = 0.0;
  StepStats stats;
  RunStatus status = RunStatus::ReachedStop;
};

/// a' = P, P' = reduced_accel(a), with s co-integrated from ds = dtau / r.
Trajectory integrate_physical(const ReducedModel& model, const PhysState& init, const IntegratorOptions& opts);

/// (r, v) under the regularized field in s, with tau co-integrated from dtau = r ds.
Trajectory integrate_regularized(const ReducedModel& model, const RegState& init, double h,
                                 const IntegratorOptions& opts);

struct DiagnosticsReport {
  std::size_t samples = 0;
  double max_h_drift = 0.0;
  double max_h_drift_scaled = 0.0;
  double max_m_residual = 0.0;
  std::optional<double> fitted_exponent;  // over the final decade of time-to-singularity
  std::optional<double> fit_r_squared;
  std::string fit_note;
  StepStats stats;
  RunStatus status = RunStatus::ReachedStop;
};

DiagnosticsReport diagnostics_report(const Trajectory& traj, const ReducedModel& model);

/// Cubic Hermite interpolation of (a, P) at tau, using P = da/dtau at the
/// bracketing samples. Samples must be monotone in tau and have a > 0.
PhysState interpolate_at(const Trajectory& traj, double tau);

/// Energy scale used to normalize Hamiltonian drift: max(1, |h|, |V(a)|, P^2/2).
double energy_scale(const ReducedModel& model, double h, double a, double p_mom);

/// CSV with header tau,s,a,P,r,v,H_residual,M_residual, 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& os);
Trajectory read_csv(std::istream& is, Chart chart, double h_level);

std::string to_string(RunStatus s);
std::string to_string(Chart c);

}  // namespace bigbang

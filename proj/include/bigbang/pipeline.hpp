#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bigbang/bounce.hpp"
#include "bigbang/cosmo.hpp"

namespace bigbang {

/// State at scale factor a0 on the constraint surface H = h, moving in the
/// requested direction. Throws DomainError where h + V(a0) < 0.
PhysState constraint_state(const ReducedModel& model, double h, double a0, Direction dir);

/// Regularized-chart approach from a0 until the time to the singularity is
/// about delta_end.
Trajectory approach_run(const ReducedModel& model, double h, double a0, double delta_end = 1e-10,
                        double rel_tol = 1e-13);

struct BounceRun {
  ReducedModel model;
  RegularityClass cls;
  double h = 0.0;
  BounceResult result;
};

/// Classify, reduce, approach from a0 and extend. NoExtensionError for
/// non-regularizable w.
BounceRun run_bounce(const CosmologyParams& params, double a0 = 1.0, double match_tau = 1e-6);

struct SweepRow {
  Rational w;
  bool regularizable = false;
  Rational gamma;
  std::optional<Parity> parity;
  std::optional<double> gamma_hat;
  std::optional<double> gamma_hat_post;
  std::optional<double> psi0;
  std::optional<double> continuity_gap;
};

struct SweepFailure {
  Rational w;
  std::string reason;
};

struct SweepReport {
  std::vector<Rational> grid;
  std::vector<SweepRow> rows;  // same order as grid
  std::vector<SweepFailure> failures;
};

/// One bounce per grid point on a pool of `jobs` workers (0 = hardware
/// concurrency). Row order always follows the grid.
SweepReport sweep(const CosmologyParams& base, const std::vector<Rational>& grid, unsigned jobs = 0,
                  double a0 = 1.0, double match_tau = 1e-6);

std::string to_json(const SweepReport& report);

}  // namespace bigbang

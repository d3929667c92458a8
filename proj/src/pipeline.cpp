#include "bigbang/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "json.hpp"

namespace bigbang {

PhysState constraint_state(const ReducedModel& model, double h, double a0, Direction dir) {
  detail::require_positive_a(a0);
  const double kinetic = 2.0 * (h + potential_value(model, a0));
  if (!(kinetic >= 0)) {
    throw DomainError("forbidden-region", "no real momentum at a0 for this energy level");
  }
  const double p = std::sqrt(kinetic);
  return PhysState{a0, dir == Direction::TowardSingularity ? -p : p, 0.0};
}

Trajectory approach_run(const ReducedModel& model, double h, double a0, double delta_end, double rel_tol) {
  const PhysState start = constraint_state(model, h, a0, Direction::TowardSingularity);
  IntegratorOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-15;
  opts.max_steps = 2000000;
  opts.stop_a_min.reset();
  // Near the bang r ~ sqrt(2)(beta + 1) times the remaining time.
  opts.stop_r_min = std::sqrt(2.0) * (model.exps.beta_f + 1.0) * delta_end;
  return integrate_regularized(model, to_regularized(model, start), h, opts);
}

BounceRun run_bounce(const CosmologyParams& params, double a0, double match_tau) {
  BounceRun run;
  run.cls = classify(params.w);
  if (!run.cls.regularizable()) {
    throw NoExtensionError("no-extension:" + run.cls.reason,
                           "w = " + params.w.str() + " is not branch regularizable (gamma = " +
                               run.cls.gamma.str() + ")");
  }
  run.model = reduce(params);
  run.h = physical_energy(params, run.model);
  const Trajectory pre = approach_run(run.model, run.h, a0);
  run.result = extend_through_singularity(run.model, run.cls, pre, match_tau);
  return run;
}

SweepReport sweep(const CosmologyParams& base, const std::vector<Rational>& grid, unsigned jobs, double a0,
                  double match_tau) {
  SweepReport report;
  report.grid = grid;
  report.rows.resize(grid.size());
  std::vector<std::string> errors(grid.size());

  auto work = [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.w = grid[i];
    const RegularityClass cls = classify(grid[i]);
    row.regularizable = cls.regularizable();
    row.gamma = cls.gamma;
    row.parity = cls.p_parity;
    try {
      CosmologyParams p = base;
      p.w = grid[i];
      const BounceRun run = run_bounce(p, a0, match_tau);
      row.gamma_hat = run.result.gamma_hat_pre;
      row.gamma_hat_post = run.result.gamma_hat_post;
      row.psi0 = run.result.psi0;
      row.continuity_gap = run.result.continuity_gap;
    } catch (const Error& e) {
      errors[i] = e.reason();
    } catch (const std::exception& e) {
      errors[i] = std::string("internal:") + e.what();
    }
  };

  unsigned n = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(grid.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < grid.size(); i = next++) work(i);
    });
  }
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!errors[i].empty()) report.failures.push_back(SweepFailure{grid[i], errors[i]});
  }
  return report;
}

std::string to_json(const SweepReport& r) {
  using nlohmann::ordered_json;
  auto num = [](const std::optional<double>& x) {
    return x && std::isfinite(*x) ? ordered_json(*x) : ordered_json(nullptr);
  };
  ordered_json j;
  ordered_json grid = ordered_json::array();
  for (const auto& w : r.grid) grid.push_back(w.str());
  j["grid"] = grid;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json o;
    o["w"] = row.w.str();
    o["regularizable"] = row.regularizable;
    o["gamma"] = row.gamma.str();
    o["parity"] = row.parity ? ordered_json(to_string(*row.parity)) : ordered_json(nullptr);
    o["gamma_hat"] = num(row.gamma_hat);
    o["gamma_hat_post"] = num(row.gamma_hat_post);
    o["psi0"] = num(row.psi0);
    o["continuity_gap"] = num(row.continuity_gap);
    rows.push_back(o);
  }
  j["rows"] = rows;
  ordered_json fails = ordered_json::array();
  for (const auto& f : r.failures) {
    ordered_json o;
    o["w"] = f.w.str();
    o["reason"] = f.reason;
    fails.push_back(o);
  }
  j["failures"] = fails;
  return j.dump();
}

}  // namespace bigbang

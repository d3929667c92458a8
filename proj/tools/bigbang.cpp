// bigbang: classification, reduction, simulation and bounce construction
// for the anisotropic Friedmann model near a = 0.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "bigbang/io.hpp"
#include "bigbang/pipeline.hpp"
#include "bigbang/verify.hpp"

namespace fs = std::filesystem;
using namespace bigbang;

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

enum Exit { kOk = 0, kUsage = 2, kObstruction = 3, kNumeric = 4 };

struct Common {
  std::string params_path;
  std::string w;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string format = "json";
};

void report(const std::string& reason, const std::string& message) {
  std::cerr << "{\"error\":\"" << reason << "\",\"message\":" << quoted(message) << "}\n";
}

CosmologyParams gather(const Common& c) {
  CosmologyParams p = c.params_path.empty() ? CosmologyParams{} : load_params(c.params_path);
  if (!c.w.empty()) p.w = Rational::parse(c.w);
  for (const auto& s : c.overrides) apply_override(p, s);
  p.validate();
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw RejectedInput("unwritable-output", "cannot write " + path.string());
  os << text;
}

std::string csv_of(const Trajectory& t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}

fs::path ensure_dir(const std::string& dir) {
  const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw RejectedInput("unwritable-output", "cannot create " + p.string());
  return p;
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(Rational::parse(item));
  }
  if (out.empty()) throw RejectedInput("empty-grid", "--w-list needs at least one value");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Big-bang regularization toolkit"};
  app.require_subcommand(1);
  Common c;

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--params", c.params_path, "parameter JSON file")->check(CLI::ExistingFile);
    sub->add_option("--set", c.overrides, "override a parameter, key=value");
  };
  auto add_w = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--w", c.w, "equation of state as an exact rational p/q");
    if (required) opt->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* classify_cmd = app.add_subcommand("classify", "regularity class of w");
  add_w(classify_cmd, true);
  add_format(classify_cmd);

  auto* reduce_cmd = app.add_subcommand("reduce", "reduced central-force model");
  add_params(reduce_cmd);
  add_w(reduce_cmd, false);

  double a0 = 1.0;
  std::string direction = "toward";
  std::string chart = "physical";
  double stop = 0.0, span = 0.0, rel_tol = 1e-10;
  auto* sim_cmd = app.add_subcommand("simulate", "integrate from a0 on the constraint surface");
  add_params(sim_cmd);
  add_w(sim_cmd, false);
  add_format(sim_cmd);
  sim_cmd->add_option("--a0", a0, "initial scale factor")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--direction", direction, "toward|away")->required()->check(CLI::IsMember({"toward", "away"}));
  sim_cmd->add_option("--chart", chart, "physical|regularized")->check(CLI::IsMember({"physical", "regularized"}));
  sim_cmd->add_option("--stop", stop, "a_min (physical) or r_min (regularized)")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--span", span, "time span in the integration variable")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--rel-tol", rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--out", c.out_dir, "directory for trajectory.csv and diagnostics.json");

  double match_tau = 1e-6;
  auto* bounce_cmd = app.add_subcommand("bounce", "continue the solution through a = 0");
  add_params(bounce_cmd);
  add_w(bounce_cmd, false);
  bounce_cmd->add_option("--a0", a0, "start of the approach")->check(CLI::PositiveNumber);
  bounce_cmd->add_option("--match-tau", match_tau, "handoff time before the bang")->check(CLI::PositiveNumber);
  bounce_cmd->add_option("--out", c.out_dir, "directory for the branch CSVs");

  std::string w_list;
  unsigned jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "bounce construction over a grid of w");
  add_params(sweep_cmd);
  sweep_cmd->add_option("--w-list", w_list, "comma separated rationals")->required();
  sweep_cmd->add_option("--jobs", jobs, "worker threads, 0 = all cores");
  sweep_cmd->add_option("--match-tau", match_tau, "handoff time before the bang")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", c.out_dir, "directory for sweep.json");

  auto* verify_cmd = app.add_subcommand("verify", "run the consistency suite");
  add_params(verify_cmd);
  add_format(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (classify_cmd->parsed()) {
      const RegularityClass cls = classify(Rational::parse(c.w));
      std::cout << to_json(cls) << '\n';
      return kOk;
    }

    if (reduce_cmd->parsed()) {
      const CosmologyParams p = gather(c);
      const ReducedModel m = reduce(p);
      std::cout << to_json(m, physical_energy(p, m)) << '\n';
      return kOk;
    }

    if (sim_cmd->parsed()) {
      const CosmologyParams p = gather(c);
      const ReducedModel m = reduce(p);
      const double h = physical_energy(p, m);
      const Direction dir = direction == "toward" ? Direction::TowardSingularity : Direction::AwayFromSingularity;
      const PhysState start = constraint_state(m, h, a0, dir);
      IntegratorOptions opts;
      opts.rel_tol = rel_tol;
      opts.direction = dir;
      opts.max_steps = 2000000;
      opts.stop_a_min.reset();
      if (span > 0) opts.stop_time_span = span;
      Trajectory traj;
      if (chart == "physical") {
        if (dir == Direction::TowardSingularity) opts.stop_a_min = stop > 0 ? stop : 1e-3;
        if (!opts.stop_a_min && !opts.stop_time_span) opts.stop_time_span = 1.0;
        traj = integrate_physical(m, start, opts);
      } else {
        if (dir == Direction::TowardSingularity) opts.stop_r_min = stop > 0 ? stop : 1e-12;
        if (!opts.stop_r_min && !opts.stop_time_span) opts.stop_time_span = 1.0;
        traj = integrate_regularized(m, to_regularized(m, start), h, opts);
      }
      const std::string diag = to_json(diagnostics_report(traj, m));
      if (!c.out_dir.empty()) {
        const fs::path dir_path = ensure_dir(c.out_dir);
        write_file(dir_path / "trajectory.csv", csv_of(traj));
        write_file(dir_path / "diagnostics.json", diag + "\n");
      }
      if (c.format == "csv") write_csv(traj, std::cout);
      else std::cout << diag << '\n';
      return kOk;
    }

    if (bounce_cmd->parsed()) {
      const CosmologyParams p = gather(c);
      const BounceRun run = run_bounce(p, a0, match_tau);
      const fs::path dir_path = ensure_dir(c.out_dir);
      const fs::path pre = dir_path / "pre_branch.csv";
      const fs::path post = dir_path / "post_branch.csv";
      write_file(pre, csv_of(run.result.pre_branch));
      write_file(post, csv_of(run.result.post_branch));
      std::cout << to_json(run.result, pre.string(), post.string()) << '\n';
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      const CosmologyParams p = gather(c);
      const SweepReport rep = sweep(p, parse_list(w_list), jobs, 1.0, match_tau);
      const std::string text = to_json(rep);
      if (!c.out_dir.empty()) write_file(ensure_dir(c.out_dir) / "sweep.json", text + "\n");
      std::cout << text << '\n';
      return kOk;
    }

    if (verify_cmd->parsed()) {
      VerifyOptions vo;
      vo.base = gather(c);
      const VerifyReport rep = run_verification(vo);
      // Table unless JSON is asked for explicitly.
      const bool as_json = verify_cmd->count("--format") > 0 && c.format == "json";
      std::cout << (as_json ? to_json(rep) + "\n" : to_table(rep));
      if (!rep.all_passed()) {
        report("verify-failed", "one or more consistency checks failed");
        return kNumeric;
      }
      return kOk;
    }
  } catch (const RejectedInput& e) {
    report(e.reason(), e.what());
    return kUsage;
  } catch (const NoExtensionError& e) {
    report(e.reason(), e.what());
    return kObstruction;
  } catch (const ImaginaryBranchError& e) {
    report(e.reason(), e.what());
    return kObstruction;
  } catch (const Error& e) {
    report(e.reason(), e.what());
    return kNumeric;
  }
  return kUsage;
}

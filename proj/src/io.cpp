#include "bigbang/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bigbang {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Rational parse_w(const json& value) {
  if (value.is_string()) return Rational::parse(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long long>());
  throw RejectedInput("w-not-exact", "w must be an exact rational such as \"7/3\", not a floating value");
}

double parse_number(const std::string& key, const json& value) {
  if (!value.is_number()) throw RejectedInput("param-not-number", "parameter '" + key + "' must be a number");
  return value.get<double>();
}

void assign(CosmologyParams& p, const std::string& key, const json& value) {
  if (key == "w") p.w = parse_w(value);
  else if (key == "sigma") p.sigma = parse_number(key, value);
  else if (key == "K") p.curvature = parse_number(key, value);
  else if (key == "G") p.newton_g = parse_number(key, value);
  else if (key == "rho_m") p.rho_m = parse_number(key, value);
  else if (key == "rho_rad") p.rho_rad = parse_number(key, value);
  else if (key == "rho_w") p.rho_w = parse_number(key, value);
  else throw RejectedInput("unknown-param", "unknown parameter '" + key + "'");
}

// JSON has no infinities; non-finite values become null.
ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json opt(const std::optional<double>& x) { return x ? num(*x) : ordered_json(nullptr); }

ordered_json stats_json(const StepStats& s) {
  ordered_json j;
  j["accepted"] = s.accepted;
  j["rejected"] = s.rejected;
  j["rhs_evals"] = s.rhs_evals;
  j["min_step"] = num(s.min_step);
  j["max_step"] = num(s.max_step);
  return j;
}

}  // namespace

CosmologyParams params_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RejectedInput("malformed-json", e.what());
  }
  if (!doc.is_object()) throw RejectedInput("malformed-json", "parameter document must be an object");
  CosmologyParams p;
  for (auto it = doc.begin(); it != doc.end(); ++it) assign(p, it.key(), it.value());
  p.validate();
  return p;
}

CosmologyParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RejectedInput("missing-file", "cannot open parameter file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

std::string params_to_json(const CosmologyParams& p) {
  ordered_json j;
  j["sigma"] = p.sigma;
  j["K"] = p.curvature;
  j["G"] = p.newton_g;
  j["rho_m"] = p.rho_m;
  j["rho_rad"] = p.rho_rad;
  j["rho_w"] = p.rho_w;
  j["w"] = p.w.str();
  return j.dump();
}

void apply_override(CosmologyParams& params, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw RejectedInput("malformed-override", "expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  if (key == "w") {
    params.w = Rational::parse(value);
  } else {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw RejectedInput("param-not-number", "override '" + key + "' needs a number, got '" + value + "'");
    }
    assign(params, key, json(x));
  }
  params.validate();
}

std::string to_json(const RegularityClass& cls) {
  ordered_json j;
  j["kind"] = to_string(cls.kind);
  j["gamma"] = cls.gamma.str();
  j["parity"] = cls.p_parity ? ordered_json(to_string(*cls.p_parity)) : ordered_json(nullptr);
  j["w"] = cls.w.str();
  j["reason"] = cls.reason;
  if (cls.warn_below_minus_one) j["warning"] = "w < -1 lies outside |w| <= 1";
  return j.dump();
}

std::string to_json(const ReducedModel& m, double h) {
  ordered_json j;
  j["w"] = m.w.str();
  j["regime"] = to_string(m.regime);
  j["alpha"] = m.exps.alpha.str();
  j["beta"] = m.exps.beta.str();
  j["gamma"] = m.exps.gamma.str();
  j["kappa"] = m.kappa.str();
  j["time_scale"] = num(m.time_scale);
  j["c_tilde"] = num(m.c_tilde);
  j["big_c"] = num(m.big_c);
  j["energy"] = num(h);
  ordered_json lead;
  lead["coef"] = num(m.lead_coef);
  lead["exponent"] = m.lead_exponent().str();
  j["lead_force"] = lead;
  ordered_json subs = ordered_json::array();
  for (const auto& f : m.sub_forces) {
    ordered_json t;
    t["source"] = f.source;
    t["coef"] = num(f.coef);
    t["exponent"] = f.exponent.str();
    subs.push_back(t);
  }
  j["sub_forces"] = subs;
  ordered_json pots = ordered_json::array();
  for (const auto& p : m.potential_terms) {
    ordered_json t;
    t["shape"] = p.shape == PotentialShape::Log ? "log" : "power";
    t["coef"] = num(p.coef);
    t["exponent"] = p.exponent.str();
    pots.push_back(t);
  }
  j["potential_terms"] = pots;
  ordered_json checks = ordered_json::array();
  for (const auto& c : m.printed_vs_derived) {
    ordered_json t;
    t["name"] = c.name;
    t["printed"] = num(c.printed);
    t["derived"] = num(c.derived);
    t["agrees"] = c.agrees();
    checks.push_back(t);
  }
  j["printed_vs_derived"] = checks;
  return j.dump();
}

std::string to_json(const DiagnosticsReport& r) {
  ordered_json j;
  j["samples"] = r.samples;
  j["status"] = to_string(r.status);
  j["max_h_drift"] = num(r.max_h_drift);
  j["max_h_drift_scaled"] = num(r.max_h_drift_scaled);
  j["max_m_residual"] = num(r.max_m_residual);
  j["fitted_exponent"] = opt(r.fitted_exponent);
  j["fit_r_squared"] = opt(r.fit_r_squared);
  if (!r.fit_note.empty()) j["fit_note"] = r.fit_note;
  j["steps"] = stats_json(r.stats);
  return j.dump();
}

std::string to_json(const BounceResult& b, const std::string& pre_csv, const std::string& post_csv) {
  ordered_json j;
  j["w"] = b.w.str();
  j["gamma"] = b.gamma.str();
  j["regularizable"] = true;
  j["sign_rule"] = to_string(b.sign_rule);
  j["psi0"] = num(b.psi0);
  j["continuity_gap"] = num(b.continuity_gap);
  j["pre_csv"] = pre_csv;
  j["post_csv"] = post_csv;
  j["gamma_hat_pre"] = num(b.gamma_hat_pre);
  j["gamma_hat_post"] = num(b.gamma_hat_post);
  j["match_tau"] = num(b.match_tau);
  j["seed_tau"] = num(b.seed_tau);
  j["seed_deviation"] = num(b.seed_deviation);
  return j.dump();
}

}  // namespace bigbang

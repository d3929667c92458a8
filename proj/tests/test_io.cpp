#include "doctest.h"

#include <functional>
#include <limits>

#include "bigbang/io.hpp"
#include "json.hpp"

using namespace bigbang;
using nlohmann::json;

namespace {
std::string reason_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.reason();
  }
  return "";
}
}  // namespace

TEST_CASE("parameter documents") {
  const CosmologyParams p = params_from_json(R"({"sigma": 2, "K": 0.5, "rho_m": 3, "w": "7/3"})");
  CHECK(p.sigma == 2.0);
  CHECK(p.curvature == 0.5);
  CHECK(p.rho_m == 3.0);
  CHECK(p.rho_rad == 1.0);
  CHECK(p.w == Rational(7, 3));
  CHECK(params_from_json(R"({"w": 2})").w == Rational(2));

  CHECK(reason_of([] { params_from_json(R"({"w": 2.5})"); }) == "w-not-exact");
  CHECK(reason_of([] { params_from_json(R"({"omega": 1})"); }) == "unknown-param");
  CHECK(reason_of([] { params_from_json("{"); }) == "malformed-json");
  CHECK(reason_of([] { params_from_json("[1]"); }) == "malformed-json");
  CHECK(reason_of([] { params_from_json(R"({"sigma": "x"})"); }) == "param-not-number");
  CHECK(reason_of([] { load_params("/nonexistent/params.json"); }) == "missing-file");
  CHECK_THROWS_AS(params_from_json(R"({"sigma": 0})"), RejectedInput);
}

TEST_CASE("round trip and overrides") {
  CosmologyParams p;
  p.w = Rational(-1, 3);
  p.rho_rad = 0.25;
  const CosmologyParams back = params_from_json(params_to_json(p));
  CHECK(back.w == p.w);
  CHECK(back.rho_rad == p.rho_rad);
  CHECK(back.newton_g == p.newton_g);

  apply_override(p, "w=9/7");
  apply_override(p, "K=-1");
  CHECK(p.w == Rational(9, 7));
  CHECK(p.curvature == -1.0);
  CHECK(reason_of([&] { apply_override(p, "K"); }) == "malformed-override");
  CHECK(reason_of([&] { apply_override(p, "K=1x"); }) == "param-not-number");
  CHECK(reason_of([&] { apply_override(p, "nope=1"); }) == "unknown-param");
}

TEST_CASE("classification json") {
  const json j = json::parse(to_json(classify(Rational(2))));
  CHECK(j["kind"] == "BranchRegularizable");
  CHECK(j["gamma"] == "2/9");
  CHECK(j["parity"] == "even");
  const json n = json::parse(to_json(classify(Rational(5, 3))));
  CHECK(n["parity"].is_null());
  CHECK(to_json(classify(Rational(7, 3))) == to_json(classify(Rational(7, 3))));
}

TEST_CASE("reduction json") {
  CosmologyParams p;
  const ReducedModel m = reduce(p);
  const json j = json::parse(to_json(m, physical_energy(p, m)));
  CHECK(j["regime"].is_string());
  CHECK(j["gamma"] == "2/9");
  CHECK(j["energy"] == 0.0);
  CHECK(j["sub_forces"].size() == m.sub_forces.size());
  for (const auto& c : j["printed_vs_derived"]) CHECK(c.contains("agrees"));
}

TEST_CASE("diagnostics json maps non-finite values to null") {
  DiagnosticsReport r;
  r.samples = 3;
  r.max_h_drift = std::numeric_limits<double>::infinity();
  const json j = json::parse(to_json(r));
  CHECK(j["samples"] == 3);
  CHECK(j["max_h_drift"].is_null());
}

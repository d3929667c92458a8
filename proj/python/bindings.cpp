#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bigbang/bounce.hpp"
#include "bigbang/io.hpp"
#include "bigbang/pipeline.hpp"
#include "bigbang/regularity.hpp"

namespace py = pybind11;
using namespace bigbang;

namespace {

CosmologyParams params_from(const py::dict& overrides) {
  CosmologyParams p;
  for (const auto& [k, v] : overrides) {
    apply_override(p, py::str(k).cast<std::string>() + "=" + py::str(v).cast<std::string>());
  }
  return p;
}

py::dict columns(const Trajectory& t) {
  std::vector<double> tau, s, a, pm, r, v;
  for (const auto& x : t.samples) {
    tau.push_back(x.tau);
    s.push_back(x.s);
    a.push_back(x.a);
    pm.push_back(x.p_mom);
    r.push_back(x.r);
    v.push_back(x.v);
  }
  py::dict d;
  d["tau"] = tau;
  d["s"] = s;
  d["a"] = a;
  d["P"] = pm;
  d["r"] = r;
  d["v"] = v;
  return d;
}

}  // namespace

PYBIND11_MODULE(_bigbang, m) {
  m.doc() = "Branch regularization of the anisotropic Friedmann big bang";

  static py::exception<Error> base(m, "BigBangError");
  static py::exception<NoExtensionError> obstruction(m, "ObstructionError", base.ptr());
  static py::exception<ImaginaryBranchError> imaginary(m, "ImaginaryBranchError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const RejectedInput& e) {
      PyErr_SetString(PyExc_ValueError, (e.reason() + ": " + e.what()).c_str());
    } catch (const NoExtensionError& e) {
      obstruction((e.reason() + ": " + e.what()).c_str());
    } catch (const ImaginaryBranchError& e) {
      imaginary((e.reason() + ": " + e.what()).c_str());
    } catch (const Error& e) {
      base((e.reason() + ": " + e.what()).c_str());
    }
  });

  m.def("classify_json", [](const std::string& w) { return to_json(classify(Rational::parse(w))); }, py::arg("w"));
  m.def(
      "exponents",
      [](const std::string& w) {
        const ExponentTriple e = exponents_of(Rational::parse(w));
        return py::make_tuple(e.alpha.str(), e.beta.str(), e.gamma.str());
      },
      py::arg("w"));
  m.def("w_from_pq", [](long long p, long long q) { return w_from_pq(p, q).str(); }, py::arg("p"), py::arg("q"));
  m.def("real_pow", [](double x, const std::string& e) { return real_pow_rational(x, Rational::parse(e)); },
        py::arg("x"), py::arg("e"));
  m.def(
      "reduce_json",
      [](const py::dict& params) {
        const CosmologyParams p = params_from(params);
        const ReducedModel model = reduce(p);
        return to_json(model, physical_energy(p, model));
      },
      py::arg("params") = py::dict());
  m.def(
      "approach",
      [](const py::dict& params, double a0, double delta_end) {
        const CosmologyParams p = params_from(params);
        const ReducedModel model = reduce(p);
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = approach_run(model, physical_energy(p, model), a0, delta_end);
        }
        py::dict out = columns(t);
        const DiagnosticsReport rep = diagnostics_report(t, model);
        out["diagnostics"] = to_json(rep);
        return out;
      },
      py::arg("params") = py::dict(), py::arg("a0") = 1.0, py::arg("delta_end") = 1e-10);
  m.def(
      "bounce",
      [](const py::dict& params, double a0, double match_tau) {
        const CosmologyParams p = params_from(params);
        BounceRun run;
        {
          py::gil_scoped_release release;
          run = run_bounce(p, a0, match_tau);
        }
        py::dict out;
        out["pre"] = columns(run.result.pre_branch);
        out["post"] = columns(run.result.post_branch);
        out["sign_rule"] = to_string(run.result.sign_rule);
        out["continuity_gap"] = run.result.continuity_gap;
        out["psi0"] = run.result.psi0;
        out["gamma_hat_pre"] = run.result.gamma_hat_pre;
        out["gamma_hat_post"] = run.result.gamma_hat_post;
        return out;
      },
      py::arg("params") = py::dict(), py::arg("a0") = 1.0, py::arg("match_tau") = 1e-6);
  m.def(
      "sweep_json",
      [](const py::dict& params, const std::vector<std::string>& grid, unsigned jobs) {
        const CosmologyParams p = params_from(params);
        std::vector<Rational> ws;
        for (const auto& w : grid) ws.push_back(Rational::parse(w));
        py::gil_scoped_release release;
        return to_json(sweep(p, ws, jobs));
      },
      py::arg("params"), py::arg("grid"), py::arg("jobs") = 0);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kslog/blowup_lab.hpp"
#include "kslog/config.hpp"
#include "kslog/energy.hpp"
#include "kslog/errors.hpp"
#include "kslog/harness.hpp"
#include "kslog/output.hpp"

namespace py = pybind11;
using namespace kslog;

namespace {

py::dict rows_dict(const std::vector<DiagnosticsRow>& rows) {
  std::vector<double> t, dt, mu, mv, maxu, minu, F, rhs, res;
  for (const DiagnosticsRow& r : rows) {
    t.push_back(r.t);
    dt.push_back(r.dt);
    mu.push_back(r.mass_u);
    mv.push_back(r.mass_v);
    maxu.push_back(r.max_u);
    minu.push_back(r.min_u);
    F.push_back(r.F);
    rhs.push_back(r.dissipation_rhs);
    res.push_back(r.identity_residual);
  }
  py::dict d;
  d["t"] = t;
  d["dt"] = dt;
  d["mass_u"] = mu;
  d["mass_v"] = mv;
  d["max_u"] = maxu;
  d["min_u"] = minu;
  d["F"] = F;
  d["dissipation_rhs"] = rhs;
  d["identity_residual"] = res;
  return d;
}

py::dict run_config_text(const std::string& text, const std::string& out_dir) {
  const ExperimentConfig cfg = parse_config(text);
  RunArtifacts a;
  {
    py::gil_scoped_release release;
    a = run_experiment(cfg, out_dir);
  }
  py::dict d;
  d["termination"] = to_string(a.result.termination.tag);
  d["classification"] = to_string(a.classification);
  d["t_final"] = a.result.termination.t_final;
  d["steps"] = a.result.steps;
  d["rows"] = rows_dict(a.result.rows);
  d["u"] = a.result.final_state.u.values;
  d["v"] = a.result.final_state.v.values;
  d["csv"] = diagnostics_csv(a.result.rows);
  return d;
}

}  // namespace

PYBIND11_MODULE(_kslog, m) {
  m.doc() = "Finite-volume chemotaxis solver with logarithmic diffusion";
  m.attr("__version__") = artifact_version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def_readwrite("a", &ModelParams::a)
      .def_readwrite("b", &ModelParams::b)
      .def_readwrite("eps", &ModelParams::eps)
      .def_readwrite("s0", &ModelParams::s0)
      .def_readwrite("psi_c", &ModelParams::psi_c)
      .def("validate", &ModelParams::validate);

  py::class_<FunctionalTable>(m, "FunctionalTable")
      .def("G", &FunctionalTable::G)
      .def("H", &FunctionalTable::H)
      .def("Gp", &FunctionalTable::Gp)
      .def_property_readonly("s_min", &FunctionalTable::s_min)
      .def_property_readonly("s_max", &FunctionalTable::s_max)
      .def_property_readonly("s0", &FunctionalTable::s0);

  m.def(
      "build_table",
      [](const ModelParams& p, bool unit_ratio, double s_min, double s_max, double tol) {
        return build_table(p, unit_ratio ? RatioOverride::unit() : RatioOverride::model(), s_min,
                           s_max, tol);
      },
      py::arg("params"), py::arg("unit_ratio") = false, py::arg("s_min") = 1e-8,
      py::arg("s_max") = 100.0, py::arg("tol") = 1e-10,
      "Tabulate the Lyapunov potentials G, G' and H.");

  m.def("A_integral", &A_integral, py::arg("N"), py::arg("lam"),
        "int_0^inf s^(N-1) (s^2 + 1)^(-lam/2) ds");

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("holds", &ConditionReport::holds)
      .def_readonly("max_violation", &ConditionReport::max_violation)
      .def_readonly("witness", &ConditionReport::witness)
      .def_readonly("tolerance", &ConditionReport::tolerance)
      .def_readonly("detail", &ConditionReport::detail);

  m.def("check_growth_condition", &check_growth_condition, py::arg("table"), py::arg("n"),
        py::arg("k"), py::arg("theta_or_alpha"), py::arg("samples") = 200,
        py::arg("s_upper") = std::nullopt);
  m.def("check_eps_condition", &check_eps_condition, py::arg("table"), py::arg("n"),
        py::arg("eps_c"), py::arg("K"), py::arg("samples") = 200,
        py::arg("s_upper") = std::nullopt);
  m.def("check_damping_threshold", &check_damping_threshold, py::arg("params"), py::arg("n"));

  m.def("config_keys", &config_keys, "(key, description) pairs of the config schema");
  m.def(
      "normalize_config", [](const std::string& text) { return to_text(parse_config(text)); },
      "Parse a config and return its canonical text.");
  m.def("run", &run_config_text, py::arg("config"), py::arg("out_dir") = std::string(),
        "Run a configuration given as text; returns termination, classification, rows and "
        "the final state.");

  m.def(
      "sweep",
      [](const std::string& text, int max_parallel) {
        ExperimentConfig cfg = parse_config(text);
        if (max_parallel > 0) cfg.max_parallel = max_parallel;
        std::vector<SweepEntry> entries;
        {
          py::gil_scoped_release release;
          entries = run_sweep(cfg);
        }
        return sweep_index_csv(cfg, entries);
      },
      py::arg("config"), py::arg("max_parallel") = 0, "Run a sweep; returns the index CSV.");

  m.def(
      "family_scan",
      [](const std::string& text, const std::vector<double>& etas) {
        const ExperimentConfig cfg = parse_config(text);
        const Grid g(cfg.domain);
        const FunctionalTable table =
            build_table(cfg.params, make_overrides(cfg.overrides).ratio, cfg.table_s_min, 100.0);
        const FamilyScan scan = family_scan(cfg.family, etas, g, table);
        py::dict d;
        d["eta"] = scan.eta;
        d["F"] = scan.F;
        d["strictly_decreasing"] = scan.strictly_decreasing;
        if (scan.eta.size() >= 3) d["exponent"] = fitted_divergence_exponent(scan, cfg.domain.R);
        return d;
      },
      py::arg("config"), py::arg("etas"), "F(u_eta, v_eta) over decreasing eta.");
}

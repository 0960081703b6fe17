#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

#include "kslog/config.hpp"
#include "kslog/errors.hpp"
#include "kslog/harness.hpp"
#include "kslog/output.hpp"

using namespace kslog;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kslog_harness_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_sweep() {
  ExperimentConfig c = parse_config(
      "domain.kind = radial\n"
      "domain.R = 1\n"
      "domain.n = 2\n"
      "domain.cells = 16\n"
      "params.a = 1\n"
      "params.eps = 0.01\n"
      "init.u = cosine\n"
      "init.u.base = 2\n"
      "run.t_end = 0.02\n"
      "run.energy = false\n"
      "sweep.axis.kappa = 2,3,4\n"
      "sweep.axis.beta = 1,1.5,2\n");
  return c;
}

RunResult fake_run(Termination tag, std::vector<std::pair<double, double>> t_max) {
  RunResult r;
  r.termination.tag = tag;
  for (auto [t, m] : t_max) {
    DiagnosticsRow row;
    row.t = t;
    row.max_u = m;
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace

TEST_CASE("config text round trip") {
  ExperimentConfig c = small_sweep();
  c.params.alpha = 1.0 / 3.0;
  c.t_end = 0.1 + 0.2;
  c.u_mass = 7.25;
  const std::string text = to_text(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(to_text(back) == text);
  CHECK(back.params.alpha == c.params.alpha);
  CHECK(back.t_end == c.t_end);
  REQUIRE(back.u_mass.has_value());
  CHECK(*back.u_mass == 7.25);
  REQUIRE(back.sweep_axes.size() == 2);
  CHECK(back.sweep_axes[0].name == "kappa");
  CHECK(back.sweep_axes[1].values == std::vector<double>{1, 1.5, 2});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("params.gamma = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("params.alpha = one\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("domain.kind = torus\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
  try {
    parse_config("# comment\n\nparams.alpha = 2\nbogus.key = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  // result lines from a manifest are skipped
  const ExperimentConfig c = parse_config("params.alpha = 2\nresult.steps = 17\nresult.anything = x\n");
  CHECK(c.params.alpha == 2.0);
  ExperimentConfig d;
  CHECK_THROWS_AS(set_config_key(d, "params.nope", "1"), ConfigError);
  set_config_key(d, "sweep.axis.mass", "1,2");
  REQUIRE(d.sweep_axes.size() == 1);
  CHECK(d.sweep_axes[0].values == std::vector<double>{1, 2});
}

TEST_CASE("every documented key is accepted") {
  ExperimentConfig c;
  const std::string text = to_text(c);
  std::set<std::string> emitted;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) emitted.insert(line.substr(0, eq));
  }
  for (const auto& [key, doc] : config_keys()) {
    CHECK_FALSE(doc.empty());
    if (key.find('<') == std::string::npos) CHECK(emitted.count(key) == 1);
  }
}

TEST_CASE("diagnostics csv format") {
  DiagnosticsRow r;
  r.t = 0.1;
  r.dt = 1e-3;
  r.mass_u = 3.0;
  r.mass_v = 2.5;
  r.max_u = 1.0 / 3.0;
  r.min_u = 0.0;
  r.F = -1.5;
  r.dissipation_rhs = -2e-7;
  r.identity_residual = 1.25e-12;
  const std::string csv = diagnostics_csv({r});
  CHECK(csv ==
        "t,dt,mass_u,mass_v,max_u,min_u,F,dissipation_rhs,identity_residual\n"
        "0.1,0.001,3,2.5,0.3333333333333333,0,-1.5,-2e-07,1.25e-12\n");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK_THROWS_AS(diagnostics_csv({}), PreconditionError);
  CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
}

TEST_CASE("svg output") {
  LineChart flat{"F", "t", "F", {0, 1, 2, 3}, {-2, -2, -2, -2}, false};
  const std::string svg = svg_line_chart(flat);
  CHECK(svg.find("<svg") != std::string::npos);
  const std::smatch m = [&] {
    std::smatch mm;
    std::regex_search(svg, mm, std::regex("points=\"([^\"]*)\""));
    return mm;
  }();
  REQUIRE(m.size() == 2);
  std::istringstream pts(m[1].str());
  std::set<std::string> ys;
  for (std::string p; pts >> p;) ys.insert(p.substr(p.find(',') + 1));
  CHECK(ys.size() == 1);

  HeatMap map{"classification", "kappa", "beta", {2, 3, 4}, {1, 1.5, 2}, {}};
  for (int k = 0; k < 9; ++k) map.labels.push_back(k % 2 ? "Global" : "BlowUp");
  const std::string heat = svg_heat_map(map);
  std::size_t cells = 0;
  for (std::size_t pos = 0; (pos = heat.find("class=\"cell\"", pos)) != std::string::npos; ++pos) ++cells;
  CHECK(cells == 9);
  map.labels.pop_back();
  CHECK_THROWS(svg_heat_map(map));
}

TEST_CASE("classification rules") {
  const ClassifyThresholds th;
  CHECK(classify_run(fake_run(Termination::Completed, {{0, 3}, {0.5, 2}, {0.8, 1.5}, {1, 1.2}}), th) ==
        Classification::Global);
  // still rising in the last quarter
  CHECK(classify_run(fake_run(Termination::Completed, {{0, 3}, {0.5, 2}, {0.8, 1.5}, {1, 1.6}}), th) ==
        Classification::Inconclusive);
  // grew past the global threshold
  CHECK(classify_run(fake_run(Termination::Completed, {{0, 1}, {0.8, 40}, {1, 30}}), th) ==
        Classification::Inconclusive);
  CHECK(classify_run(fake_run(Termination::BlowUp, {{0, 1}, {0.1, 2}}), th) == Classification::BlowUp);
  CHECK(classify_run(fake_run(Termination::DtUnderflow, {{0, 1}, {0.1, 2000}}), th) ==
        Classification::BlowUp);
  CHECK(classify_run(fake_run(Termination::DtUnderflow, {{0, 1}, {0.1, 20}}), th) ==
        Classification::Inconclusive);
  CHECK(classify_run(fake_run(Termination::NumericalFailure, {{0, 1}, {0.1, 1}}), th) ==
        Classification::Inconclusive);
}

TEST_CASE("sweeps do not depend on the thread count") {
  ExperimentConfig serial = small_sweep();
  serial.max_parallel = 1;
  ExperimentConfig parallel = serial;
  parallel.max_parallel = 3;
  const fs::path dir = scratch("sweep");
  const auto a = run_sweep(serial);
  const auto b = run_sweep(parallel, dir.string());
  CHECK(sweep_index_csv(serial, a) == sweep_index_csv(serial, b));
  REQUIRE(a.size() == 9);
  CHECK(a[1].axis_values == std::vector<double>{3, 1});
  CHECK(a[3].axis_values == std::vector<double>{2, 1.5});
  CHECK(read_text((dir / "index.csv").string()) == sweep_index_csv(serial, a));
  CHECK(fs::exists(dir / "heat_map.svg"));
  CHECK(fs::exists(dir / "run_8" / "manifest.cfg"));
  fs::remove_all(dir);

  ExperimentConfig bad = serial;
  bad.sweep_axes.clear();
  CHECK_THROWS_AS(run_sweep(bad), ConfigError);
}

TEST_CASE("manifest reproduces a run") {
  ExperimentConfig c = small_sweep();
  c.sweep_axes.clear();
  c.energy = true;
  const fs::path d1 = scratch("m1"), d2 = scratch("m2");
  const RunArtifacts a = run_experiment(c, d1.string());
  for (const char* f : {"diagnostics.csv", "max_u.svg", "F.svg", "final_state.csv", "manifest.cfg"})
    CHECK(fs::exists(d1 / f));
  const std::string manifest = read_text((d1 / "manifest.cfg").string());
  CHECK(manifest.find("result.classification = ") != std::string::npos);
  CHECK(manifest.find("result.grid_checksum = ") != std::string::npos);
  const ExperimentConfig again = parse_config(manifest);
  run_experiment(again, d2.string());
  CHECK(read_text((d1 / "diagnostics.csv").string()) == read_text((d2 / "diagnostics.csv").string()));
  CHECK(read_text((d1 / "final_state.csv").string()) == read_text((d2 / "final_state.csv").string()));
  CHECK(a.result.termination.tag == Termination::Completed);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("io failures") {
  const fs::path blocker = scratch("blocker");
  write_text(blocker.string(), "x");
  CHECK_THROWS_AS(write_text((blocker / "child.txt").string(), "y"), IoError);
  CHECK_THROWS_AS(read_text((blocker / "missing").string()), IoError);
  ExperimentConfig c = small_sweep();
  c.sweep_axes.clear();
  CHECK_THROWS_AS(run_experiment(c, (blocker / "out").string()), IoError);
  fs::remove_all(blocker);
}

TEST_CASE("initial data from config") {
  ExperimentConfig c = parse_config(
      "domain.kind = interval\ndomain.R = 0.5\ndomain.n = 1\ndomain.cells = 32\n"
      "init.u = gaussian\ninit.u.amplitude = 2\ninit.u.center = 0.5\ninit.u.width = 0.1\n"
      "init.u.mass = 4\ninit.v = equal_u\n");
  const RunConfig rc = build_run_config(c);
  const Grid g(c.domain);
  CHECK(integrate(rc.u0, g) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rc.v0.values == rc.u0.values);
  c.u_init.kind = "steady";
  CHECK_THROWS_AS(build_run_config(c), ConfigError);
}

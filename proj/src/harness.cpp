#include "kslog/harness.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <sstream>
#include <thread>

#include "kslog/errors.hpp"
#include "kslog/output.hpp"

namespace kslog {

namespace fs = std::filesystem;

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Global:
      return "Global";
    case Classification::BlowUp:
      return "BlowUp";
    case Classification::Inconclusive:
      return "Inconclusive";
  }
  return "Unknown";
}

const char* artifact_version() { return KSLOG_VERSION; }

Classification classify_run(const RunResult& r, const ClassifyThresholds& th) {
  if (r.rows.empty()) return Classification::Inconclusive;
  const double m0 = r.rows.front().max_u;
  const double m1 = r.rows.back().max_u;
  switch (r.termination.tag) {
    case Termination::BlowUp:
      return Classification::BlowUp;
    case Termination::DtUnderflow:
      return m1 >= th.blowup_growth * m0 ? Classification::BlowUp : Classification::Inconclusive;
    case Termination::NumericalFailure:
      return Classification::Inconclusive;
    case Termination::Completed:
      break;
  }
  if (!(m1 <= th.global_growth * m0)) return Classification::Inconclusive;
  const double t_q = 0.75 * r.rows.back().t;
  double m_q = m1;
  for (const DiagnosticsRow& row : r.rows) {
    if (row.t >= t_q) {
      m_q = row.max_u;
      break;
    }
  }
  return m1 <= m_q * (1.0 + 1e-9) ? Classification::Global : Classification::Inconclusive;
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir);
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  const RunConfig rc = build_run_config(cfg);
  RunArtifacts a;
  const auto t0 = std::chrono::steady_clock::now();
  a.result = run(rc);
  a.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  a.classification = classify_run(a.result, cfg.classify);
  if (out_dir.empty()) return a;

  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  const auto& rows = a.result.rows;
  write_text((dir / "diagnostics.csv").string(), diagnostics_csv(rows));
  a.files.push_back("diagnostics.csv");

  LineChart maxu{"max u", "t", "max_u", {}, {}, cfg.log_max_u};
  LineChart F{"Lyapunov functional", "t", "F", {}, {}, false};
  for (const DiagnosticsRow& r : rows) {
    maxu.x.push_back(r.t);
    maxu.y.push_back(r.max_u);
    F.x.push_back(r.t);
    F.y.push_back(r.F);
  }
  write_text((dir / "max_u.svg").string(), svg_line_chart(maxu));
  a.files.push_back("max_u.svg");
  write_text((dir / "F.svg").string(), svg_line_chart(F));
  a.files.push_back("F.svg");
  const Grid g(cfg.domain);
  write_text((dir / "final_state.csv").string(), state_csv(a.result.final_state, g));
  a.files.push_back("final_state.csv");
  a.files.push_back("manifest.cfg");
  write_text((dir / "manifest.cfg").string(), manifest_text(cfg, a));
  return a;
}

std::string manifest_text(const ExperimentConfig& cfg, const RunArtifacts& a) {
  std::ostringstream os;
  os << "# kslog run manifest\n";
  os << to_text(cfg) << '\n';
  const Grid g(cfg.domain);
  const TerminationReason& tr = a.result.termination;
  os << "result.version = " << artifact_version() << '\n';
  os << "result.grid_checksum = " << g.id() << '\n';
  os << "result.termination = " << to_string(tr.tag) << '\n';
  os << "result.classification = " << to_string(a.classification) << '\n';
  os << "result.t_final = " << format_number(tr.t_final) << '\n';
  if (tr.blowup_estimate) os << "result.blowup_estimate = " << format_number(*tr.blowup_estimate) << '\n';
  os << "result.last_dt = " << format_number(tr.last_dt) << '\n';
  os << "result.steps = " << a.result.steps << '\n';
  os << "result.wall_seconds = " << format_number(a.wall_seconds) << '\n';
  os << "result.files = ";
  for (std::size_t i = 0; i < a.files.size(); ++i) os << (i ? "," : "") << a.files[i];
  os << '\n';
  return os.str();
}

void apply_axis(ExperimentConfig& cfg, const std::string& name, double value) {
  if (name == "alpha") {
    cfg.params.alpha = value;
  } else if (name == "beta") {
    cfg.params.beta = value;
  } else if (name == "kappa") {
    cfg.params.kappa = value;
  } else if (name == "eps") {
    cfg.params.eps = value;
  } else if (name == "mass") {
    // the family normalizes itself; other profiles are rescaled
    if (cfg.u_init.kind == "eta_family") {
      cfg.family.mass = value;
    } else {
      cfg.u_mass = value;
    }
  } else {
    throw ConfigError("unknown sweep axis '" + name + "'");
  }
}

std::vector<SweepEntry> run_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.sweep_axes.empty()) throw ConfigError("sweep: no sweep.axis.* keys");
  if (cfg.max_parallel < 1) throw ConfigError("sweep.max_parallel must be >= 1");
  std::size_t total = 1;
  for (const auto& axis : cfg.sweep_axes) {
    if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.name + "' has no values");
    total *= axis.values.size();
  }
  if (!out_dir.empty()) ensure_dir(out_dir);

  // Each slot is written by exactly one worker.
  std::vector<SweepEntry> entries(total);
  std::vector<ExperimentConfig> configs(total, cfg);
  for (std::size_t id = 0; id < total; ++id) {
    entries[id].id = static_cast<int>(id);
    std::size_t rest = id;
    for (const auto& axis : cfg.sweep_axes) {
      const double v = axis.values[rest % axis.values.size()];
      rest /= axis.values.size();
      entries[id].axis_values.push_back(v);
      apply_axis(configs[id], axis.name, v);
    }
    configs[id].sweep_axes.clear();
    configs[id].max_parallel = 1;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t id = next++; id < total; id = next++) {
      SweepEntry& e = entries[id];
      std::string dir;
      if (!out_dir.empty()) {
        std::ostringstream name;
        name << "run_" << id;
        dir = (fs::path(out_dir) / name.str()).string();
      }
      try {
        RunArtifacts a = run_experiment(configs[id], dir);
        e.termination = a.result.termination.tag;
        e.classification = a.classification;
        e.t_final = a.result.termination.t_final;
        e.max_u_initial = a.result.rows.front().max_u;
        e.max_u_final = a.result.rows.back().max_u;
        e.steps = a.result.steps;
      } catch (const std::exception& err) {
        e.termination = Termination::NumericalFailure;
        e.classification = Classification::Inconclusive;
        e.error = err.what();
      }
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(cfg.max_parallel, total);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!out_dir.empty()) {
    write_text((fs::path(out_dir) / "index.csv").string(), sweep_index_csv(cfg, entries));
    if (cfg.sweep_axes.size() >= 2) {
      const auto& ax = cfg.sweep_axes[0];
      const auto& ay = cfg.sweep_axes[1];
      HeatMap map{"classification", ax.name, ay.name, ax.values, ay.values, {}};
      for (std::size_t j = 0; j < ay.values.size(); ++j)
        for (std::size_t i = 0; i < ax.values.size(); ++i)
          map.labels.push_back(to_string(entries[j * ax.values.size() + i].classification));
      write_text((fs::path(out_dir) / "heat_map.svg").string(), svg_heat_map(map));
    }
  }
  return entries;
}

std::string sweep_index_csv(const ExperimentConfig& cfg, const std::vector<SweepEntry>& entries) {
  std::string out = "id";
  for (const auto& axis : cfg.sweep_axes) out += "," + axis.name;
  out += ",termination,classification,t_final,max_u_initial,max_u_final,steps,error\n";
  for (const SweepEntry& e : entries) {
    out += std::to_string(e.id);
    for (double v : e.axis_values) out += "," + format_number(v);
    out += ",";
    out += e.error.empty() ? to_string(e.termination) : "Error";
    out += ",";
    out += to_string(e.classification);
    out += "," + format_number(e.t_final) + "," + format_number(e.max_u_initial) + "," +
           format_number(e.max_u_final) + "," + std::to_string(e.steps) + ",";
    // keep the CSV single-line per run
    for (char c : e.error) out += (c == ',' || c == '\n') ? ';' : c;
    out += '\n';
  }
  return out;
}

}  // namespace kslog

#pragma once

#include <string>
#include <vector>

#include "kslog/config.hpp"
#include "kslog/solver.hpp"

namespace kslog {

enum class Classification { Global, BlowUp, Inconclusive };

const char* to_string(Classification c);

/// Global: Completed, max_u(end) <= global_growth * max_u(0) and max_u not
/// rising over the final quarter of the run (last value <= value at the
/// start of the quarter, relative slack 1e-9).
/// BlowUp: termination BlowUp, or DtUnderflow with max_u(end) >=
/// blowup_growth * max_u(0).
/// Everything else, NumericalFailure included, is Inconclusive.
Classification classify_run(const RunResult& r, const ClassifyThresholds& th = {});

const char* artifact_version();

struct RunArtifacts {
  RunResult result;
  Classification classification = Classification::Inconclusive;
  double wall_seconds = 0.0;
  std::vector<std::string> files;  // relative to the output directory
};

/// Runs one experiment. With a nonempty out_dir (created if missing) it
/// writes diagnostics.csv, max_u.svg, F.svg, final_state.csv and
/// manifest.cfg.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir = {});

/// Config echo followed by result.* lines (version, grid checksum,
/// termination, wall time, file list). Loads back through parse_config.
std::string manifest_text(const ExperimentConfig& cfg, const RunArtifacts& a);

struct SweepEntry {
  int id = 0;
  std::vector<double> axis_values;  // one per axis, in axis order
  Termination termination = Termination::Completed;
  Classification classification = Classification::Inconclusive;
  double t_final = 0.0;
  double max_u_initial = 0.0;
  double max_u_final = 0.0;
  long steps = 0;
  std::string error;  // configuration errors raised by this run
};

/// Applies one axis value (alpha, beta, kappa, eps, or mass).
void apply_axis(ExperimentConfig& cfg, const std::string& name, double value);

/// Cartesian product of cfg.sweep_axes (first axis varies fastest), run on
/// up to cfg.max_parallel threads. Entries come back ordered by id and do
/// not depend on the thread count. With a nonempty out_dir each run gets
/// run_<id>/ and the directory receives index.csv plus heat_map.svg when
/// there are at least two axes (first two axes, remaining ones at their
/// first value).
std::vector<SweepEntry> run_sweep(const ExperimentConfig& cfg, const std::string& out_dir = {});

std::string sweep_index_csv(const ExperimentConfig& cfg, const std::vector<SweepEntry>& entries);

}  // namespace kslog

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kslog/blowup_lab.hpp"
#include "kslog/core.hpp"
#include "kslog/solver.hpp"

namespace kslog {

/// Initial profile description. Profiles are functions of the coordinate
/// x (interval, x in [0, 2R]) or r (radial ball, r in [0, R]).
///   constant     value
///   cosine       base + amplitude cos(pi x / L), L = 2R or R
///   gaussian     base + amplitude exp(-((x - center)/width)^2)
///   eta_family   u_eta / v_eta from the family.* keys (radial only)
///   steady       v only: solution of -lap v + v = u0
///   equal_u      v only: v0 = u0
struct InitSpec {
  std::string kind = "constant";
  double value = 1.0;
  double base = 1.0;
  double amplitude = 0.5;
  double center = 0.0;
  double width = 0.25;
};

/// overrides.* values: phi in {model, one}, psi in {model, zero},
/// f in {model, zero}, ratio in {model, unit}.
struct OverrideSpec {
  std::string phi = "model";
  std::string psi = "model";
  std::string f = "model";
  std::string ratio = "model";
};

struct ClassifyThresholds {
  double global_growth = 10.0;
  double blowup_growth = 1000.0;
};

struct SweepAxis {
  std::string name;  // alpha, beta, kappa, eps or mass
  std::vector<double> values;
};

/// Everything a config file can express.
struct ExperimentConfig {
  DomainSpec domain;
  ModelParams params;
  InitSpec u_init{"cosine"};
  InitSpec v_init{"steady"};
  std::optional<double> u_mass;  // rescale u0 to this mass when set
  double t_end = 1.0;
  double cfl = 0.4;
  double dt_max = 1e-2;
  double dt_min = 1e-12;
  double blowup_cap = 1e8;
  int diag_every = 1;
  bool energy = true;
  double table_s_min = 1e-8;
  OverrideSpec overrides;
  FamilyParams family;
  ClassifyThresholds classify;
  bool log_max_u = true;  // log scale on the max_u chart
  std::vector<SweepAxis> sweep_axes;
  int max_parallel = 1;
};

/// Parses flat `section.key = value` text. '#' starts a comment. Keys
/// under result.* are ignored so that manifests load as configs. Unknown
/// keys and malformed values throw ConfigError naming the line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Applies one key; the same validation as the parser.
void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Canonical text form listing every key. Numbers use the shortest
/// round-trip representation, so parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& cfg);

ModelOverrides make_overrides(const OverrideSpec& spec);

/// Samples the initial data and assembles a validated RunConfig.
RunConfig build_run_config(const ExperimentConfig& cfg);

/// The (key, description) list used for the help text and schema doc.
const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace kslog

#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "kslog/core.hpp"
#include "kslog/diagnostics.hpp"
#include "kslog/nonlin.hpp"

namespace kslog {

struct RunConfig {
  DomainSpec domain;
  ModelParams params;
  Field u0;
  Field v0;
  double t_end = 1.0;
  double cfl = 0.4;
  double dt_max = 1e-2;
  double dt_min = 1e-12;
  double blowup_cap = 1e8;
  int diag_every = 1;
  ModelOverrides overrides;
  // Energy diagnostics need a G/H table; disabling them leaves F and the
  // identity columns at zero.
  bool energy = true;
  double table_s_min = 1e-8;

  /// Throws ConfigError/PreconditionError on invalid settings.
  void validate() const;
};

enum class Termination { Completed, BlowUp, DtUnderflow, NumericalFailure };

const char* to_string(Termination t);

struct TerminationReason {
  Termination tag = Termination::Completed;
  double t_final = 0.0;
  std::optional<double> blowup_estimate;  // last time before the cap was exceeded
  double last_dt = 0.0;                   // most recent CFL step size
  std::string detail;
};

struct RunResult {
  TerminationReason termination;
  std::vector<DiagnosticsRow> rows;
  State final_state;
  long steps = 0;
};

/// Stable step size for the explicit u update: cfl / max_i(total outflow
/// rate of cell i), where the rate sums the diffusive exchange
/// (A phi / (V h) over both faces), the drift speed |psi'(u) grad v| A / V
/// on outflow faces and the reaction slope |f'(u)|. Capped at dt_max.
double cfl_dt(const State& s, const Grid& g, const Nonlinearities& model, double cfl,
              double dt_max = std::numeric_limits<double>::infinity());

/// One IMEX step: forward Euler for u, backward Euler for v with u_new on
/// the right-hand side. Does not validate positivity.
State step(const State& s, double dt, const Grid& g, const Nonlinearities& model);

RunResult run(const RunConfig& cfg);

/// Sup-norm separation between a run and a copy with u0 perturbed by
/// delta * bump, advanced in lockstep with a shared step size.
struct DependenceRecord {
  std::vector<double> t;
  std::vector<double> separation;
  double rate = 0.0;       // fitted C in separation <= K e^{C t} delta
  double prefactor = 0.0;  // smallest K making the bound hold on all samples
  bool completed = true;
  Termination termination = Termination::Completed;
};

/// Nonnegative smooth bump centered in the domain, peak value 1.
Field perturbation_bump(const Grid& g);

DependenceRecord continuous_dependence(const RunConfig& cfg, double delta, double t_probe);

struct EpsilonScan {
  std::vector<double> eps;
  std::vector<State> states;  // at t_probe, one per eps
  std::vector<double> gaps;   // |u_k - u_{k+1}|_inf
  bool strictly_decreasing = true;
  std::optional<double> aborted_eps;  // eps whose run did not complete
};

EpsilonScan epsilon_convergence_scan(const RunConfig& cfg, const std::vector<double>& eps_list,
                                     double t_probe);

}  // namespace kslog

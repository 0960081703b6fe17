#pragma once

namespace kslog {

/// One diagnostics sample. A row at time t describes the state at t and,
/// for rows after the initial one, the step of size dt that ended there:
/// dissipation_rhs is the right-hand side of the discrete energy identity
/// at the start of that step and identity_residual its mismatch with the
/// observed (F(t) - F(t - dt))/dt. The initial row carries dt = 0 and zeros
/// in both identity columns.
struct DiagnosticsRow {
  double t = 0.0;
  double dt = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double max_u = 0.0;
  double min_u = 0.0;
  double F = 0.0;
  double dissipation_rhs = 0.0;
  double identity_residual = 0.0;
  // (int v^2 + int |grad v|^2)^(1/2); monitored, not part of the CSV schema.
  double v_w12 = 0.0;
};

}  // namespace kslog

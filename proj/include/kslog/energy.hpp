#pragma once

#include <string>
#include <utility>

#include "kslog/core.hpp"
#include "kslog/diagnostics.hpp"
#include "kslog/nonlin.hpp"

namespace kslog {

/// F(u, v) = int G(u) - uv + v^2/2 + |grad v|^2/2, split by term.
struct EnergyBreakdown {
  double G_term = 0.0;
  double uv_term = 0.0;  // int u v (enters F with a minus sign)
  double v2_term = 0.0;
  double gradv_term = 0.0;
  double F_total = 0.0;
  int clamped_cells = 0;  // cells where u < s_min and G was taken at s_min
};

/// Cell sums for the potential terms; |grad v|^2 is summed over interior
/// faces with weight A_f h. Extends the table when max u exceeds s_max.
EnergyBreakdown lyapunov_F(const State& s, const Grid& g, const FunctionalTable& table);

/// Right-hand side of the discrete energy identity:
///
///   - sum_f A_f h (grad G'(u) - grad v)_f J_f - int v_t^2 + int f(u) (G'(u) - v)
///
/// with J = phi grad u - psi grad v the scheme's own face flux. For the
/// model ratio phi/psi the first sum is the face discretization of
/// int psi |(phi/psi) grad u - grad v|^2. Faces with both neighbours below
/// s_min are skipped.
double dissipation_rhs(const State& s, const Field& v_t, const Grid& g,
                       const Nonlinearities& model, const FunctionalTable& table);

/// |(F1 - F0)/dt - rhs|
double identity_residual(double F0, double F1, double dt, double rhs);
double identity_residual(const DiagnosticsRow& before, const DiagnosticsRow& after, double rhs);

/// Energy with the uv term eliminated through the steady v equation:
/// int G(u) - v^2/2 - |grad v|^2/2.
double lyapunov_F_steady(const State& s, const Grid& g, const FunctionalTable& table);

/// L2 norms of div(phi grad u - psi grad v) and lap v - v + u.
std::pair<double, double> steady_residual(const State& s, const Grid& g,
                                          const Nonlinearities& model);

/// Radial weight zeta(r) together with its derivative.
struct RadialProfile {
  ScalarFn value;
  ScalarFn slope;
  std::string name;
};

/// ln((R^2 + eta)/(r^2 + eta))
RadialProfile log_profile(double R, double eta);
/// zeta0(k (R - r)) with zeta0 a smooth nondecreasing step from 0 (x <= 1)
/// to 1 (x >= 2).
RadialProfile cutoff_profile(double R, double k);

struct ZetaReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double tolerance = 0.0;
};

/// Two sides of the zeta-weighted Pohozaev-type inequality
///
///   (n-2)/2 int zeta |grad v|^2 - 1/2 int r zeta' |grad v|^2
///     <= int r zeta (v + s0) |grad v| + n int_{u > s0} zeta H(u)
///
/// on a radial grid. Throws PreconditionError when zeta is not
/// nonnegative and nonincreasing with zeta(R) = 0 = zeta'(0) (sampled,
/// tolerance 1e-8).
ZetaReport zeta_inequality(const State& s, const Grid& g, const FunctionalTable& table,
                           const RadialProfile& zeta, double s0, double tol = 1e-10);

/// -c3 m^2 - c2 - n K m / (n - 2 - eps_c). Throws DomainError when
/// n - 2 - eps_c <= 0.
double f_lower_bound(double m, double c2, double c3, double K, int n, double eps_c);

}  // namespace kslog

#include "kslog/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kslog/discrete.hpp"
#include "kslog/errors.hpp"

namespace kslog {

EnergyBreakdown lyapunov_F(const State& s, const Grid& g, const FunctionalTable& table) {
  require_on_grid(s.u, g);
  require_on_grid(s.v, g);
  const double umax = linf(s.u);
  const FunctionalTable active = table.covers(umax) ? table : table.extended_to(umax);

  EnergyBreakdown e;
  auto vol = g.cell_volume();
  for (int i = 0; i < g.cells(); ++i) {
    const double u = s.u.values[i];
    const double v = s.v.values[i];
    double arg = u;
    if (arg < active.s_min()) {
      arg = active.s_min();
      ++e.clamped_cells;
    }
    e.G_term += vol[i] * active.G(arg);
    e.uv_term += vol[i] * u * v;
    e.v2_term += 0.5 * vol[i] * v * v;
  }
  const std::vector<double> gv = grad_faces(s.v, g);
  auto area = g.face_area();
  const double h = g.h();
  for (int f = 1; f < g.cells(); ++f) e.gradv_term += 0.5 * area[f] * h * gv[f] * gv[f];
  e.F_total = e.G_term - e.uv_term + e.v2_term + e.gradv_term;
  return e;
}

double dissipation_rhs(const State& s, const Field& v_t, const Grid& g,
                       const Nonlinearities& model, const FunctionalTable& table) {
  require_on_grid(v_t, g);
  const double umax = linf(s.u);
  const FunctionalTable active = table.covers(umax) ? table : table.extended_to(umax);
  const int nc = g.cells();
  const double smin = active.s_min();

  std::vector<double> gp(nc);
  for (int i = 0; i < nc; ++i) gp[i] = active.Gp(std::max(s.u.values[i], smin));

  const FaceFlux D = diffusive_flux(s.u, g, model);
  const FaceFlux C = chemotactic_flux(s.u, s.v, g, model);
  const std::vector<double> gv = grad_faces(s.v, g);
  auto area = g.face_area();
  auto vol = g.cell_volume();
  const double h = g.h();
  const double inv_h = 1.0 / h;

  double flux_term = 0.0;
  for (int f = 1; f < nc; ++f) {
    if (s.u.values[f - 1] < smin && s.u.values[f] < smin) continue;
    const double x = (gp[f] - gp[f - 1]) * inv_h - gv[f];
    flux_term += area[f] * h * x * (D.values[f] - C.values[f]);
  }
  double vt2 = 0.0;
  double source = 0.0;
  for (int i = 0; i < nc; ++i) {
    vt2 += vol[i] * v_t.values[i] * v_t.values[i];
    source += vol[i] * model.f(s.u.values[i]) * (gp[i] - s.v.values[i]);
  }
  return -flux_term - vt2 + source;
}

double identity_residual(double F0, double F1, double dt, double rhs) {
  if (!(dt > 0.0)) throw PreconditionError("identity_residual: dt must be > 0");
  return std::abs((F1 - F0) / dt - rhs);
}

double identity_residual(const DiagnosticsRow& before, const DiagnosticsRow& after, double rhs) {
  return identity_residual(before.F, after.F, after.t - before.t, rhs);
}

double lyapunov_F_steady(const State& s, const Grid& g, const FunctionalTable& table) {
  const EnergyBreakdown e = lyapunov_F(s, g, table);
  return e.G_term - e.v2_term - e.gradv_term;
}

std::pair<double, double> steady_residual(const State& s, const Grid& g,
                                          const Nonlinearities& model) {
  const FaceFlux D = diffusive_flux(s.u, g, model);
  const FaceFlux C = chemotactic_flux(s.u, s.v, g, model);
  FaceFlux J{D.values};
  for (std::size_t f = 0; f < J.values.size(); ++f) J.values[f] -= C.values[f];
  const Field ru = div_cells(J, g);
  const Field lap = laplacian(s.v, g);
  auto vol = g.cell_volume();
  double nu = 0.0;
  double nv = 0.0;
  for (int i = 0; i < g.cells(); ++i) {
    const double rv = lap.values[i] - s.v.values[i] + s.u.values[i];
    nu += vol[i] * ru.values[i] * ru.values[i];
    nv += vol[i] * rv * rv;
  }
  return {std::sqrt(nu), std::sqrt(nv)};
}

// ---------------------------------------------------------------------------

RadialProfile log_profile(double R, double eta) {
  if (!(R > 0.0 && eta > 0.0)) throw PreconditionError("log_profile: R and eta must be > 0");
  RadialProfile z;
  z.value = [R, eta](double r) { return std::log((R * R + eta) / (r * r + eta)); };
  z.slope = [eta](double r) { return -2.0 * r / (r * r + eta); };
  z.name = "log";
  return z;
}

namespace {

double smooth_unit_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double p = std::exp(-1.0 / y);
  const double q = std::exp(-1.0 / (1.0 - y));
  return p / (p + q);
}

double smooth_unit_step_slope(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  const double p = std::exp(-1.0 / y);
  const double q = std::exp(-1.0 / (1.0 - y));
  const double dp = p / (y * y);
  const double dq = -q / ((1.0 - y) * (1.0 - y));
  return (dp * q - p * dq) / ((p + q) * (p + q));
}

}  // namespace

RadialProfile cutoff_profile(double R, double k) {
  if (!(R > 0.0 && k > 2.0 / R))
    throw PreconditionError("cutoff_profile: requires k > 2/R so that zeta'(0) = 0");
  RadialProfile z;
  z.value = [R, k](double r) { return smooth_unit_step(k * (R - r) - 1.0); };
  z.slope = [R, k](double r) { return -k * smooth_unit_step_slope(k * (R - r) - 1.0); };
  z.name = "cutoff";
  return z;
}

namespace {

void validate_profile(const RadialProfile& z, double R) {
  constexpr double tol = 1e-8;
  constexpr int samples = 1000;
  if (!z.value || !z.slope) throw PreconditionError("zeta profile needs value and slope");
  if (std::abs(z.value(R)) > tol) throw PreconditionError("zeta profile: zeta(R) != 0");
  if (std::abs(z.slope(0.0)) > tol) throw PreconditionError("zeta profile: zeta'(0) != 0");
  double prev = z.value(0.0);
  for (int i = 0; i <= samples; ++i) {
    const double r = R * i / samples;
    const double val = z.value(r);
    if (val < -tol) throw PreconditionError("zeta profile: negative value");
    if (val > prev + tol) throw PreconditionError("zeta profile: not nonincreasing");
    prev = val;
  }
}

}  // namespace

ZetaReport zeta_inequality(const State& s, const Grid& g, const FunctionalTable& table,
                           const RadialProfile& zeta, double s0, double tol) {
  if (!g.radial()) throw PreconditionError("zeta_inequality: requires a radial grid");
  require_on_grid(s.u, g);
  require_on_grid(s.v, g);
  validate_profile(zeta, g.spec().R);

  const int n = g.spec().n;
  const int nc = g.cells();
  const double h = g.h();
  auto area = g.face_area();
  auto rf = g.face_pos();
  auto rc = g.centers();
  auto vol = g.cell_volume();
  const std::vector<double> gv = grad_faces(s.v, g);

  double lhs = 0.0;
  double rhs = 0.0;
  for (int f = 1; f < nc; ++f) {
    const double w = area[f] * h;
    const double r = rf[f];
    const double z = zeta.value(r);
    const double zp = zeta.slope(r);
    const double g2 = gv[f] * gv[f];
    const double v_face = 0.5 * (s.v.values[f - 1] + s.v.values[f]);
    lhs += w * (0.5 * (n - 2) * z * g2 - 0.5 * r * zp * g2);
    rhs += w * r * z * (v_face + s0) * std::abs(gv[f]);
  }
  const double umax = linf(s.u);
  const FunctionalTable active = table.covers(umax) ? table : table.extended_to(umax);
  for (int i = 0; i < nc; ++i) {
    const double u = s.u.values[i];
    if (u > s0) rhs += n * vol[i] * zeta.value(rc[i]) * active.H(u);
  }
  ZetaReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.tolerance = tol;
  rep.holds = lhs <= rhs + tol;
  return rep;
}

double f_lower_bound(double m, double c2, double c3, double K, int n, double eps_c) {
  const double gap = n - 2.0 - eps_c;
  if (!(gap > 0.0)) {
    std::ostringstream msg;
    msg << "f_lower_bound: n - 2 - eps_c must be > 0, got " << gap;
    throw DomainError(msg.str());
  }
  return -c3 * m * m - c2 - n * K * m / gap;
}

}  // namespace kslog

#include "kslog/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kslog/discrete.hpp"
#include "kslog/energy.hpp"
#include "kslog/errors.hpp"

namespace kslog {

namespace {
constexpr double kRateGuard = 1e-30;
constexpr double kTableTol = 1e-10;
}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed:
      return "Completed";
    case Termination::BlowUp:
      return "BlowUp";
    case Termination::DtUnderflow:
      return "DtUnderflow";
    case Termination::NumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

void RunConfig::validate() const {
  domain.validate();
  params.validate();
  const Grid g(domain);
  require_on_grid(u0, g);
  require_on_grid(v0, g);
  if (!all_finite(u0) || !all_finite(v0)) throw ConfigError("RunConfig: non-finite initial data");
  if (min_value(u0) < 0.0) throw ConfigError("RunConfig: u0 must be >= 0");
  if (min_value(v0) < 0.0) throw ConfigError("RunConfig: v0 must be >= 0");
  if (!(t_end > 0.0)) throw ConfigError("RunConfig: t_end must be > 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("RunConfig: cfl must lie in (0, 1]");
  if (!(dt_min < dt_max)) throw ConfigError("RunConfig: dt_min must be < dt_max");
  if (!(blowup_cap > 0.0)) throw ConfigError("RunConfig: blowup_cap must be > 0");
  if (diag_every < 1) throw ConfigError("RunConfig: diag_every must be >= 1");
  if (overrides.ratio.tag == RatioKind::Custom && !overrides.ratio.custom)
    throw ConfigError("RunConfig: Custom ratio without a function");
}

double cfl_dt(const State& s, const Grid& g, const Nonlinearities& model, double cfl,
              double dt_max) {
  const int nc = g.cells();
  auto area = g.face_area();
  auto vol = g.cell_volume();
  const double h = g.h();
  const double inv_h = 1.0 / h;
  const auto& u = s.u.values;
  const auto& v = s.v.values;

  std::vector<double> rate(nc, 0.0);
  for (int i = 0; i < nc; ++i) rate[i] = std::abs(model.df(u[i]));
  for (int f = 1; f < nc; ++f) {
    const double ul = u[f - 1];
    const double ur = u[f];
    const double exchange = area[f] * model.phi(0.5 * (ul + ur)) * inv_h;
    rate[f - 1] += exchange / vol[f - 1];
    rate[f] += exchange / vol[f];
    const double slope = (v[f] - v[f - 1]) * inv_h;
    if (slope > 0.0) {
      rate[f - 1] += area[f] * std::abs(model.dpsi(ul) * slope) / vol[f - 1];
    } else if (slope < 0.0) {
      rate[f] += area[f] * std::abs(model.dpsi(ur) * slope) / vol[f];
    }
  }
  const double worst = *std::max_element(rate.begin(), rate.end());
  return std::min(dt_max, cfl / (worst + kRateGuard));
}

State step(const State& s, double dt, const Grid& g, const Nonlinearities& model) {
  const FaceFlux D = diffusive_flux(s.u, g, model);
  const FaceFlux C = chemotactic_flux(s.u, s.v, g, model);
  FaceFlux J{D.values};
  for (std::size_t f = 0; f < J.values.size(); ++f) J.values[f] -= C.values[f];
  const Field div = div_cells(J, g);

  State next;
  next.t = s.t + dt;
  next.u = s.u;
  for (int i = 0; i < g.cells(); ++i) {
    next.u.values[i] += dt * (div.values[i] + model.f(s.u.values[i]));
  }
  // Solve for the increment so that equilibria stay fixed to the last bit.
  const Field lap = laplacian(s.v, g);
  Field rhs = s.v;
  for (int i = 0; i < g.cells(); ++i)
    rhs.values[i] = dt * (next.u.values[i] - s.v.values[i] + lap.values[i]);
  const Field dv = solve_helmholtz(rhs, dt, g);
  next.v = s.v;
  for (int i = 0; i < g.cells(); ++i) next.v.values[i] += dv.values[i];
  return next;
}

namespace {

double v_w12_proxy(const Field& v, const Grid& g) {
  auto vol = g.cell_volume();
  auto area = g.face_area();
  double acc = 0.0;
  for (int i = 0; i < g.cells(); ++i) acc += vol[i] * v.values[i] * v.values[i];
  const std::vector<double> gv = grad_faces(v, g);
  for (int f = 1; f < g.cells(); ++f) acc += area[f] * g.h() * gv[f] * gv[f];
  return std::sqrt(acc);
}

class Diagnostics {
 public:
  Diagnostics(const RunConfig& cfg, const Grid& g, const Nonlinearities& model)
      : cfg_(cfg), g_(g), model_(model) {
    if (cfg.energy) {
      const ModelParams& p = cfg.params;
      const double smax = std::max({10.0 * linf(cfg.u0), 2.0 * p.s0, p.s0 + 1.0});
      table_ = build_table(p, cfg.overrides.ratio, std::min(cfg.table_s_min, 0.5 * p.s0), smax,
                           kTableTol);
    }
  }

  DiagnosticsRow initial(const State& s) {
    DiagnosticsRow row = basic(s);
    row.dt = 0.0;
    if (table_) row.F = energy(s);
    return row;
  }

  // Row at `after`, describing the step prev -> after of size dt.
  DiagnosticsRow after_step(const State& prev, const State& after, double dt) {
    DiagnosticsRow row = basic(after);
    row.dt = dt;
    if (table_) {
      const double F0 = energy(prev);
      row.F = energy(after);
      Field vt = after.v;
      for (std::size_t i = 0; i < vt.values.size(); ++i)
        vt.values[i] = (after.v.values[i] - prev.v.values[i]) / dt;
      row.dissipation_rhs = dissipation_rhs(prev, vt, g_, model_, *table_);
      row.identity_residual = identity_residual(F0, row.F, dt, row.dissipation_rhs);
    }
    return row;
  }

 private:
  DiagnosticsRow basic(const State& s) const {
    DiagnosticsRow row;
    row.t = s.t;
    row.mass_u = integrate(s.u, g_);
    row.mass_v = integrate(s.v, g_);
    row.max_u = linf(s.u);
    row.min_u = min_value(s.u);
    row.v_w12 = v_w12_proxy(s.v, g_);
    return row;
  }

  double energy(const State& s) {
    const double umax = linf(s.u);
    if (!table_->covers(umax)) table_ = table_->extended_to(2.0 * umax);
    // Cache keyed on the exact state time: the same state is evaluated as
    // "after" of one step and "prev" of the next.
    if (cached_t_ && *cached_t_ == s.t && cached_u0_ == s.u.values.front()) return cached_F_;
    cached_F_ = lyapunov_F(s, g_, *table_).F_total;
    cached_t_ = s.t;
    cached_u0_ = s.u.values.front();
    return cached_F_;
  }

  const RunConfig& cfg_;
  const Grid& g_;
  const Nonlinearities& model_;
  std::optional<FunctionalTable> table_;
  std::optional<double> cached_t_;
  double cached_u0_ = 0.0;
  double cached_F_ = 0.0;
};

}  // namespace

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  const Grid g(cfg.domain);
  const Nonlinearities model(cfg.params, cfg.overrides);
  Diagnostics diag(cfg, g, model);

  RunResult result;
  State state{cfg.u0, cfg.v0, 0.0};
  State prev = state;
  double last_dt = 0.0;
  const double umax0 = linf(cfg.u0);
  result.rows.push_back(diag.initial(state));

  auto finish = [&](Termination tag, std::string detail) {
    if (result.rows.back().t < state.t) result.rows.push_back(diag.after_step(prev, state, last_dt));
    result.termination.tag = tag;
    result.termination.t_final = state.t;
    result.termination.detail = std::move(detail);
    result.final_state = state;
  };

  while (true) {
    if (state.t >= cfg.t_end) {
      finish(Termination::Completed, "reached t_end");
      break;
    }
    const double dt_cfl = cfl_dt(state, g, model, cfg.cfl, cfg.dt_max);
    result.termination.last_dt = dt_cfl;
    if (!(dt_cfl >= cfg.dt_min)) {
      std::ostringstream msg;
      msg << "CFL step " << dt_cfl << " below dt_min " << cfg.dt_min;
      finish(Termination::DtUnderflow, msg.str());
      break;
    }
    const double remaining = cfg.t_end - state.t;
    // Land exactly on t_end instead of leaving a sliver step.
    const double dt = dt_cfl >= remaining ? remaining : dt_cfl;
    State next = step(state, dt, g, model);
    if (dt_cfl >= remaining) next.t = cfg.t_end;

    if (!all_finite(next.u) || !all_finite(next.v) || min_value(next.u) < 0.0 ||
        min_value(next.v) < 0.0) {
      std::ostringstream msg;
      msg << "invalid values after step at t = " << state.t << " (min u " << min_value(next.u)
          << ")";
      finish(Termination::NumericalFailure, msg.str());
      break;
    }
    prev = std::move(state);
    state = std::move(next);
    last_dt = dt;
    ++result.steps;

    const double umax = linf(state.u);
    const bool blown = umax > cfg.blowup_cap && umax >= 10.0 * umax0;
    if (blown || result.steps % cfg.diag_every == 0)
      result.rows.push_back(diag.after_step(prev, state, dt));
    if (blown) {
      result.termination.blowup_estimate = prev.t;
      finish(Termination::BlowUp, "max u exceeded blowup_cap");
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

Field perturbation_bump(const Grid& g) {
  const double center = g.radial() ? 0.0 : g.spec().R;
  const double width = 0.25 * g.spec().R;
  return sample_field(g, [&](double x) {
    const double z = (x - center) / width;
    return std::exp(-z * z);
  });
}

DependenceRecord continuous_dependence(const RunConfig& cfg, double delta, double t_probe) {
  cfg.validate();
  if (!(delta >= 0.0)) throw PreconditionError("continuous_dependence: delta must be >= 0");
  if (!(t_probe > 0.0 && t_probe <= cfg.t_end))
    throw PreconditionError("continuous_dependence: t_probe must lie in (0, t_end]");
  const Grid g(cfg.domain);
  const Nonlinearities model(cfg.params, cfg.overrides);

  State a{cfg.u0, cfg.v0, 0.0};
  State b = a;
  const Field bump = perturbation_bump(g);
  for (int i = 0; i < g.cells(); ++i) b.u.values[i] += delta * bump.values[i];

  DependenceRecord rec;
  rec.t.push_back(0.0);
  rec.separation.push_back(delta == 0.0 ? 0.0 : delta * linf(bump));
  const double umax0 = std::max(linf(a.u), linf(b.u));
  long steps = 0;
  while (a.t < t_probe) {
    double dt = std::min(cfl_dt(a, g, model, cfg.cfl, cfg.dt_max),
                         cfl_dt(b, g, model, cfg.cfl, cfg.dt_max));
    if (dt < cfg.dt_min) {
      rec.completed = false;
      rec.termination = Termination::DtUnderflow;
      break;
    }
    const bool last = dt >= t_probe - a.t;
    if (last) dt = t_probe - a.t;
    a = step(a, dt, g, model);
    b = step(b, dt, g, model);
    if (last) a.t = b.t = t_probe;
    if (!all_finite(a.u) || !all_finite(b.u) || min_value(a.u) < 0.0 || min_value(b.u) < 0.0) {
      rec.completed = false;
      rec.termination = Termination::NumericalFailure;
      break;
    }
    const double umax = std::max(linf(a.u), linf(b.u));
    if (umax > cfg.blowup_cap && umax >= 10.0 * umax0) {
      rec.completed = false;
      rec.termination = Termination::BlowUp;
      break;
    }
    ++steps;
    if (steps % cfg.diag_every == 0 || last) {
      double sep = 0.0;
      for (int i = 0; i < g.cells(); ++i)
        sep = std::max(sep, std::abs(a.u.values[i] - b.u.values[i]));
      rec.t.push_back(a.t);
      rec.separation.push_back(sep);
    }
  }

  if (delta > 0.0) {
    // Least-squares slope of log(sep/delta) against t.
    double st = 0, sy = 0, stt = 0, sty = 0;
    int count = 0;
    for (std::size_t k = 0; k < rec.t.size(); ++k) {
      if (!(rec.separation[k] > 0.0)) continue;
      const double y = std::log(rec.separation[k] / delta);
      st += rec.t[k];
      sy += y;
      stt += rec.t[k] * rec.t[k];
      sty += rec.t[k] * y;
      ++count;
    }
    const double denom = count * stt - st * st;
    rec.rate = (count >= 2 && denom > 0.0) ? (count * sty - st * sy) / denom : 0.0;
    for (std::size_t k = 0; k < rec.t.size(); ++k) {
      rec.prefactor =
          std::max(rec.prefactor, rec.separation[k] / (delta * std::exp(rec.rate * rec.t[k])));
    }
  }
  return rec;
}

EpsilonScan epsilon_convergence_scan(const RunConfig& cfg, const std::vector<double>& eps_list,
                                     double t_probe) {
  if (!(t_probe > 0.0)) throw PreconditionError("epsilon_convergence_scan: t_probe must be > 0");
  for (std::size_t k = 1; k < eps_list.size(); ++k) {
    if (!(eps_list[k] < eps_list[k - 1]))
      throw PreconditionError("epsilon_convergence_scan: eps_list must be strictly decreasing");
  }
  EpsilonScan scan;
  for (double eps : eps_list) {
    RunConfig c = cfg;
    c.params.eps = eps;
    c.t_end = t_probe;
    c.energy = false;
    RunResult r = run(c);
    if (r.termination.tag != Termination::Completed) {
      scan.aborted_eps = eps;
      break;
    }
    scan.eps.push_back(eps);
    scan.states.push_back(std::move(r.final_state));
  }
  for (std::size_t k = 0; k + 1 < scan.states.size(); ++k) {
    double gap = 0.0;
    const auto& ua = scan.states[k].u.values;
    const auto& ub = scan.states[k + 1].u.values;
    for (std::size_t i = 0; i < ua.size(); ++i) gap = std::max(gap, std::abs(ua[i] - ub[i]));
    scan.gaps.push_back(gap);
  }
  for (std::size_t k = 1; k < scan.gaps.size(); ++k) {
    if (!(scan.gaps[k] < scan.gaps[k - 1])) scan.strictly_decreasing = false;
  }
  if (scan.aborted_eps) scan.strictly_decreasing = false;
  return scan;
}

}  // namespace kslog

#include "kslog/blowup_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kslog/energy.hpp"
#include "kslog/errors.hpp"
#include "kslog/quadrature.hpp"

namespace kslog {

namespace {

// Tail of A(N, lambda) beyond S > 1 from the binomial expansion
// (s^2 + 1)^(-lambda/2) = s^(-lambda) sum_k binom(-lambda/2, k) s^(-2k).
double A_tail(double N, double lambda, double S) {
  double coef = 1.0;  // binom(-lambda/2, k)
  double total = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double expo = lambda - N + 2.0 * k;
    const double term = coef * std::pow(S, -expo) / expo;
    total += term;
    if (std::abs(term) < 1e-18) break;
    coef *= (-0.5 * lambda - k) / (k + 1.0);
  }
  return total;
}

}  // namespace

double A_integral(double N, double lambda) {
  if (!(N > 0.0 && lambda > N)) {
    std::ostringstream msg;
    msg << "A_integral: requires lambda > N > 0 (got N = " << N << ", lambda = " << lambda << ")";
    throw DomainError(msg.str());
  }
  constexpr double S = 10.0;
  auto integrand = [N, lambda](double s) {
    return std::pow(s, N - 1.0) * std::pow(s * s + 1.0, -0.5 * lambda);
  };
  // Split at 1 so that the s^(N-1) endpoint behaviour sits in its own panel.
  const double head = integrate_adaptive(integrand, 0.0, 1.0, 1e-13).value +
                      integrate_adaptive(integrand, 1.0, S, 1e-13).value;
  return head + A_tail(N, lambda, S);
}

double radial_moment(double N, double lambda, double R, double eta) {
  if (!(R > 0.0 && eta > 0.0)) throw PreconditionError("radial_moment: R and eta must be > 0");
  auto integrand = [N, lambda, eta](double r) {
    return std::pow(r, N - 1.0) * std::pow(r * r + eta * eta, -0.5 * lambda);
  };
  // Panels at eta-multiples keep the peak resolved for small eta.
  std::vector<double> cuts{0.0};
  for (double c : {eta, 4.0 * eta, 16.0 * eta, 64.0 * eta}) {
    if (c < R) cuts.push_back(c);
  }
  cuts.push_back(R);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += integrate_adaptive(integrand, cuts[k], cuts[k + 1], 0.0, 1e-13).value;
  }
  return total;
}

double a_eta(const FamilyParams& fp, const DomainSpec& d) {
  if (d.kind != DomainKind::RadialBall) throw PreconditionError("a_eta: requires a radial ball");
  const int n = d.n;
  const double denom = unit_sphere_area(n) * radial_moment(n, fp.beta, d.R, fp.eta);
  return std::pow(fp.eta, n - fp.beta) * fp.mass / denom;
}

namespace {

std::vector<double> eta_profile(const FamilyParams& fp, const Grid& g) {
  const int n = g.spec().n;
  const double pre = std::pow(fp.eta, fp.beta - n);
  std::vector<double> w(g.cells());
  auto rc = g.centers();
  for (int i = 0; i < g.cells(); ++i)
    w[i] = pre * std::pow(rc[i] * rc[i] + fp.eta * fp.eta, -0.5 * fp.beta);
  return w;
}

}  // namespace

double discrete_a_eta(const FamilyParams& fp, const Grid& g) {
  if (!g.radial()) throw PreconditionError("discrete_a_eta: requires a radial grid");
  if (!(fp.eta > 0.0 && fp.mass > 0.0))
    throw PreconditionError("discrete_a_eta: eta and mass must be > 0");
  const std::vector<double> w = eta_profile(fp, g);
  auto vol = g.cell_volume();
  double total = 0.0;
  for (int i = 0; i < g.cells(); ++i) total += w[i] * vol[i];
  return fp.mass / total;
}

Field u_eta_field(const FamilyParams& fp, const Grid& g) {
  const double a = discrete_a_eta(fp, g);
  Field u = make_field(g);
  const std::vector<double> w = eta_profile(fp, g);
  for (int i = 0; i < g.cells(); ++i) u.values[i] = a * w[i];
  return u;
}

void require_admissible(const FamilyParams& fp, const Grid& g) {
  if (!g.radial()) throw PreconditionError("blow-up family: requires a radial grid");
  const double R = g.spec().R;
  if (!(fp.eta > 0.0)) throw PreconditionError("blow-up family: eta must be > 0");
  if (g.spec().n == 2) {
    if (!(fp.eta < 0.5 * R)) throw PreconditionError("blow-up family: n = 2 requires eta < R/2");
    if (!(fp.theta > 0.0 && fp.theta < 1.0))
      throw PreconditionError("blow-up family: theta must lie in (0, 1)");
    if (!(fp.kappa_prime > 0.0 && fp.kappa_prime < 1.0 - fp.theta))
      throw PreconditionError("blow-up family: n = 2 requires 0 < kappa' < 1 - theta");
  } else if (!(fp.delta > 0.0)) {
    throw PreconditionError("blow-up family: n >= 3 requires delta > 0");
  }
}

Field v_eta_field(const FamilyParams& fp, const Grid& g, int n) {
  if (n != g.spec().n) throw UsageError("v_eta_field: n does not match the grid dimension");
  require_admissible(fp, g);
  const double R = g.spec().R;
  const double e2 = fp.eta * fp.eta;
  auto rc = g.centers();
  Field v = make_field(g);
  if (n == 2) {
    const double pre = std::pow(std::log(R / fp.eta), -fp.kappa_prime);
    for (int i = 0; i < g.cells(); ++i)
      v.values[i] = std::max(0.0, pre * std::log(R * R / (rc[i] * rc[i] + e2)));
  } else {
    const double pre = std::pow(fp.eta, fp.delta - fp.gamma);
    for (int i = 0; i < g.cells(); ++i)
      v.values[i] = pre * std::pow(rc[i] * rc[i] + e2, -0.5 * fp.delta);
  }
  return v;
}

FamilyScan family_scan(const FamilyParams& fp, const std::vector<double>& eta_list, const Grid& g,
                       const FunctionalTable& table) {
  for (std::size_t k = 1; k < eta_list.size(); ++k) {
    if (!(eta_list[k] < eta_list[k - 1]))
      throw PreconditionError("family_scan: eta_list must be strictly decreasing");
  }
  std::vector<State> states;
  double umax = 0.0;
  for (double eta : eta_list) {
    FamilyParams member = fp;
    member.eta = eta;
    require_admissible(member, g);
    State s{u_eta_field(member, g), v_eta_field(member, g, g.spec().n), 0.0};
    umax = std::max(umax, linf(s.u));
    states.push_back(std::move(s));
  }
  const FunctionalTable active = table.covers(umax) ? table : table.extended_to(umax);

  FamilyScan scan;
  for (std::size_t k = 0; k < states.size(); ++k) {
    scan.eta.push_back(eta_list[k]);
    scan.F.push_back(lyapunov_F(states[k], g, active).F_total);
  }
  if (scan.F.size() >= 2) {
    bool dec = true;
    for (std::size_t k = 1; k < scan.F.size(); ++k) dec = dec && scan.F[k] < scan.F[k - 1];
    scan.strictly_decreasing = dec;
  }
  return scan;
}

namespace {

// Residual of the least-squares fit y ~ A x^p + B for fixed p.
double offset_fit_residual(const std::vector<double>& x, const std::vector<double>& y, double p) {
  const std::size_t m = x.size();
  double s1 = 0, s2 = 0, sy = 0, s1y = 0;
  std::vector<double> z(m);
  for (std::size_t k = 0; k < m; ++k) {
    z[k] = std::pow(x[k], p);
    s1 += z[k];
    s2 += z[k] * z[k];
    sy += y[k];
    s1y += z[k] * y[k];
  }
  const double det = m * s2 - s1 * s1;
  const double A = (m * s1y - s1 * sy) / det;
  const double B = (sy - A * s1) / m;
  double res = 0.0;
  for (std::size_t k = 0; k < m; ++k) res += (A * z[k] + B - y[k]) * (A * z[k] + B - y[k]);
  return res;
}

}  // namespace

double fitted_divergence_exponent(const FamilyScan& scan, double R) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < scan.eta.size(); ++k) {
    x.push_back(std::log(R / scan.eta[k]));
    y.push_back(-scan.F[k]);
  }
  if (x.size() < 3)
    throw PreconditionError("fitted_divergence_exponent: needs at least three samples");
  // Coarse scan then golden-section refinement of p.
  constexpr double lo = 0.01;
  constexpr double hi = 4.0;
  constexpr int coarse = 400;
  double best_p = lo;
  double best_r = offset_fit_residual(x, y, lo);
  for (int i = 1; i <= coarse; ++i) {
    const double p = lo + (hi - lo) * i / coarse;
    const double r = offset_fit_residual(x, y, p);
    if (r < best_r) {
      best_r = r;
      best_p = p;
    }
  }
  const double step = (hi - lo) / coarse;
  double a = std::max(lo, best_p - step);
  double b = std::min(hi, best_p + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (offset_fit_residual(x, y, c) < offset_fit_residual(x, y, d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

InitialData find_initial_below(double C, const FamilyParams& fp, const Grid& g,
                               const FunctionalTable& table) {
  if (!(C > 0.0)) throw PreconditionError("find_initial_below: C must be > 0");
  const int n = g.spec().n;
  const ConditionReport growth =
      check_growth_condition(table, n, fp.growth_k, n == 2 ? fp.theta : fp.alpha_prime, 200);
  if (!growth.holds) {
    std::ostringstream msg;
    msg << "find_initial_below: growth condition fails (max violation " << growth.max_violation
        << ")";
    throw PreconditionError(msg.str());
  }
  const double R = g.spec().R;
  const double floor = 2.0 * g.h();
  FunctionalTable active = table;
  for (double eta = 0.2 * R; eta >= floor; eta *= 0.5) {
    FamilyParams member = fp;
    member.eta = eta;
    require_admissible(member, g);
    InitialData out;
    out.u = u_eta_field(member, g);
    out.v = v_eta_field(member, g, n);
    out.eta = eta;
    const double umax = linf(out.u);
    if (!active.covers(umax)) active = active.extended_to(umax);
    out.F = lyapunov_F(State{out.u, out.v, 0.0}, g, active).F_total;
    if (out.F < -C) return out;
  }
  std::ostringstream msg;
  msg << "find_initial_below: no eta >= 2h = " << floor << " reaches F < -" << C
      << "; refine the grid";
  throw ResolutionError(msg.str());
}

}  // namespace kslog

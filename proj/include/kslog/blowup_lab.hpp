#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kslog/core.hpp"
#include "kslog/nonlin.hpp"

namespace kslog {

/// Parameters of the concentrating initial-data family
///
///   u_eta(x) = a_eta eta^(beta - n) (|x|^2 + eta^2)^(-beta/2)
///   v_eta(x) = (ln R/eta)^(-kappa') ln(R^2 / (|x|^2 + eta^2))     (n = 2)
///   v_eta(x) = eta^(delta - gamma) (|x|^2 + eta^2)^(-delta/2)      (n >= 3)
///
/// kappa' is the n = 2 exponent (distinct from the damping exponent).
struct FamilyParams {
  double eta = 0.1;
  double beta = 2.0;
  double mass = 1.0;
  double kappa_prime = 0.25;
  double theta = 0.5;
  double delta = 1.0;
  double gamma = 1.0;
  double growth_k = 10.0;    // k in the growth condition checked by find_initial_below
  double alpha_prime = 1.0;  // n >= 3 growth exponent, must exceed 2/n
};

/// int_0^inf s^(N-1) (s^2 + 1)^(-lambda/2) ds, absolute error <= 1e-10.
/// Adaptive quadrature on [0, S] plus a convergent series for the tail.
/// Throws DomainError unless lambda > N > 0.
double A_integral(double N, double lambda);

/// int_0^R r^(N-1) (r^2 + eta^2)^(-lambda/2) dr by adaptive quadrature.
double radial_moment(double N, double lambda, double R, double eta);

/// Continuous normalizer eta^(n - beta) mass / int_Omega (|x|^2 + eta^2)^(-beta/2) dx.
double a_eta(const FamilyParams& fp, const DomainSpec& d);

/// Cell-center samples of u_eta, rescaled so that integrate() returns
/// fp.mass exactly on this grid (the discrete normalizer differs from
/// a_eta by O((h/eta)^2)).
Field u_eta_field(const FamilyParams& fp, const Grid& g);

/// Discrete counterpart of a_eta used by u_eta_field.
double discrete_a_eta(const FamilyParams& fp, const Grid& g);

/// Positive part of v_eta on a radial grid (the n = 2 formula dips below
/// zero in the outermost cells when eta^2 > R h). Throws PreconditionError
/// for eta >= R/2 or kappa' outside (0, 1 - theta) on the n = 2 branch.
Field v_eta_field(const FamilyParams& fp, const Grid& g, int n);

/// Validates the n = 2 branch constraints (used by the scans as well).
void require_admissible(const FamilyParams& fp, const Grid& g);

struct FamilyScan {
  std::vector<double> eta;
  std::vector<double> F;
  std::optional<bool> strictly_decreasing;  // absent for a single eta
};

/// F(u_eta, v_eta) for each eta (decreasing).
FamilyScan family_scan(const FamilyParams& fp, const std::vector<double>& eta_list, const Grid& g,
                       const FunctionalTable& table);

/// Leading exponent p of the least-squares fit -F ~ A (ln R/eta)^p + B.
/// The offset B absorbs the bounded potential and v^2 contributions.
double fitted_divergence_exponent(const FamilyScan& scan, double R);

struct InitialData {
  Field u;
  Field v;
  double eta = 0.0;
  double F = 0.0;
};

/// First eta of the sweep R/5, R/10, ... (floor 2h) with F(u_eta, v_eta) < -C.
/// Requires the growth condition to hold for fp.growth_k; throws
/// ResolutionError when the sweep reaches the floor first.
InitialData find_initial_below(double C, const FamilyParams& fp, const Grid& g,
                               const FunctionalTable& table);

}  // namespace kslog

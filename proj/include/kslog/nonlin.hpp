#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kslog/core.hpp"

namespace kslog {

using ScalarFn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Scalar nonlinearities. All throw DomainError for u < 0.

/// ln^alpha(1 + u)
double eval_phi(double u, const ModelParams& p);
/// ln^alpha(1 + u + eps)
double eval_phi_eps(double u, const ModelParams& p);
/// psi_c * u^beta
double eval_psi(double u, const ModelParams& p);
/// a - b u^kappa
double eval_f(double u, const ModelParams& p);

/// Smooth C-infinity cutoff: 1 on [0, 1/(2 eps)], 0 on [1/eps, inf).
/// Identically 1 when eps == 0.
double eps_cutoff(double u, double eps);
double eps_cutoff_slope(double u, double eps);

/// f(u) times eps_cutoff(u, eps): the compactly supported regularized source.
double eval_f_eps(double u, const ModelParams& p);

// ---------------------------------------------------------------------------
// Ratio phi_eps / psi, the integrand of the Lyapunov potential G.

enum class RatioKind { ModelRatio, UnitRatio, Custom };

struct RatioOverride {
  RatioKind tag = RatioKind::ModelRatio;
  ScalarFn custom;  // required when tag == Custom; defined on (0, inf)

  static RatioOverride model() { return {}; }
  static RatioOverride unit() { return {RatioKind::UnitRatio, {}}; }
  static RatioOverride from(ScalarFn fn) { return {RatioKind::Custom, std::move(fn)}; }
};

/// Throws DomainError for tau <= 0 and PreconditionError when a Custom
/// override carries no function.
double eval_ratio(double tau, const ModelParams& p, const RatioOverride& ov);

// ---------------------------------------------------------------------------
// Model bundle used by the discrete operators and the time stepper. Empty
// override slots fall back to the closed-form model nonlinearities.

struct ModelOverrides {
  RatioOverride ratio;
  ScalarFn phi;  // replaces phi_eps
  ScalarFn psi;  // replaces psi
  ScalarFn f;    // replaces f_eps
};

class Nonlinearities {
 public:
  Nonlinearities() = default;
  explicit Nonlinearities(ModelParams p, ModelOverrides ov = {});

  const ModelParams& params() const { return params_; }
  const ModelOverrides& overrides() const { return ov_; }

  double phi(double u) const;   // phi_eps or override
  double psi(double u) const;
  double dpsi(double u) const;  // slope of psi, used for the drift speed
  double f(double u) const;     // f_eps or override
  double df(double u) const;    // slope of f_eps
  double ratio(double tau) const { return eval_ratio(tau, params_, ov_.ratio); }

 private:
  ModelParams params_;
  ModelOverrides ov_;
};

/// Common overrides: phi = 1, psi = 0, f = 0 turns the u equation into the
/// heat equation (ratio set to 1 so the energy stays defined).
ModelOverrides heat_mode_overrides();

// ---------------------------------------------------------------------------
// Tabulated Lyapunov potentials
//
//   G'(s) = int_{s0}^{s} rho,   G(s) = int_{s0}^{s} G',   H(s) = int_{s0}^{s} sigma rho(sigma)
//
// with rho the active ratio. Values between knots come from cubic Hermite
// interpolation on exact knot derivatives with a Fritsch-Carlson limiter.

class FunctionalTable {
 public:
  double G(double s) const;
  double H(double s) const;
  double Gp(double s) const;

  double s_min() const;
  double s_max() const;
  double s0() const;
  double tol() const;
  std::span<const double> knots() const;

  bool covers(double s) const { return s <= s_max(); }

  const ModelParams& params() const;
  const RatioOverride& ratio() const;

  /// New table whose s_max is doubled until it reaches `s`. Returns a copy
  /// of *this when already covering.
  FunctionalTable extended_to(double s) const;

  struct Data;

 private:
  friend FunctionalTable build_table(const ModelParams&, const RatioOverride&, double, double,
                                     double);
  std::shared_ptr<const Data> data_;
};

/// Tabulates G, H and G' on [s_min, s_max]. Accuracy target: quadrature
/// error and interpolation error (checked at interval midpoints) below
/// tol * max(1, |value|). Throws PreconditionError unless
/// 0 < s_min < s0 < s_max, and QuadratureError (with the zero-endpoint
/// verdict in its message) if the integrals cannot be resolved.
FunctionalTable build_table(const ModelParams& p, const RatioOverride& ov, double s_min = 1e-8,
                            double s_max = 100.0, double tol = 1e-10);

/// Local power law rho(tau) ~ c tau^(-order) as tau -> 0+ and what it
/// implies for the potentials at the singular endpoint.
struct ZeroEndpointVerdict {
  double order = 0.0;
  bool Gp_finite = true;  // order < 1
  bool G_finite = true;   // order < 2
};
ZeroEndpointVerdict classify_zero_endpoint(const ModelParams& p, const RatioOverride& ov);

// ---------------------------------------------------------------------------
// Structural condition checks

/// Numeric verdict for an inequality lhs(s) <= rhs(s) sampled on a range.
struct ConditionReport {
  bool holds = true;
  double max_violation = 0.0;    // max of lhs - rhs over the samples
  std::optional<double> witness;  // sample point attaining max_violation
  double tolerance = 0.0;
  std::string detail;
};

/// Blow-up-permissive regime flag: kappa < beta + 2/n.
bool check_damping_threshold(const ModelParams& p, int n);

/// G(s) <= k s (ln s)^theta (n = 2) or G(s) <= k s^(2 - alpha') (n >= 3),
/// sampled geometrically on [s0, s_upper] (s_upper defaults to s_max).
ConditionReport check_growth_condition(const FunctionalTable& table, int n, double k,
                                       double theta_or_alpha, int samples,
                                       std::optional<double> s_upper = std::nullopt);

/// H(s) <= ((n - 2 - eps_c)/n) G(s) + K s sampled on [s0, s_upper].
ConditionReport check_eps_condition(const FunctionalTable& table, int n, double eps_c, double K,
                                    int samples, std::optional<double> s_upper = std::nullopt);

}  // namespace kslog

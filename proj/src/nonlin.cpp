#include "kslog/nonlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kslog/errors.hpp"
#include "kslog/quadrature.hpp"

namespace kslog {

namespace {

void require_nonneg(double u, const char* what) {
  if (!(u >= 0.0)) {
    std::ostringstream msg;
    msg << what << ": argument must be >= 0, got " << u;
    throw DomainError(msg.str());
  }
}

double numeric_slope(const ScalarFn& fn, double u) {
  const double h = 1e-6 * std::max(1.0, std::abs(u));
  const double lo = std::max(0.0, u - h);
  return (fn(u + h) - fn(lo)) / (u + h - lo);
}

// exp(-1/x) for x > 0, the usual building block of smooth step functions.
double bump_piece(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double bump_piece_slope(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

}  // namespace

double eval_phi(double u, const ModelParams& p) {
  require_nonneg(u, "eval_phi");
  return std::pow(std::log1p(u), p.alpha);
}

double eval_phi_eps(double u, const ModelParams& p) {
  require_nonneg(u, "eval_phi_eps");
  return std::pow(std::log1p(u + p.eps), p.alpha);
}

double eval_psi(double u, const ModelParams& p) {
  require_nonneg(u, "eval_psi");
  if (u == 0.0) return 0.0;
  return p.psi_c * std::pow(u, p.beta);
}

double eval_f(double u, const ModelParams& p) {
  require_nonneg(u, "eval_f");
  return p.a - p.b * std::pow(u, p.kappa);
}

double eps_cutoff(double u, double eps) {
  if (eps <= 0.0) return 1.0;
  const double lo = 0.5 / eps;
  if (u <= lo) return 1.0;
  if (u >= 2.0 * lo) return 0.0;
  const double s = (u - lo) / lo;
  const double p = bump_piece(1.0 - s);
  const double q = bump_piece(s);
  return p / (p + q);
}

double eps_cutoff_slope(double u, double eps) {
  if (eps <= 0.0) return 0.0;
  const double lo = 0.5 / eps;
  if (u <= lo || u >= 2.0 * lo) return 0.0;
  const double s = (u - lo) / lo;
  const double p = bump_piece(1.0 - s);
  const double q = bump_piece(s);
  const double dp = -bump_piece_slope(1.0 - s);
  const double dq = bump_piece_slope(s);
  return (dp * q - p * dq) / ((p + q) * (p + q)) / lo;
}

double eval_f_eps(double u, const ModelParams& p) {
  const double chi = eps_cutoff(u, p.eps);
  return chi == 0.0 ? 0.0 : chi * eval_f(u, p);
}

double eval_ratio(double tau, const ModelParams& p, const RatioOverride& ov) {
  if (!(tau > 0.0)) {
    std::ostringstream msg;
    msg << "eval_ratio: tau must be > 0, got " << tau;
    throw DomainError(msg.str());
  }
  switch (ov.tag) {
    case RatioKind::UnitRatio:
      return 1.0;
    case RatioKind::Custom:
      if (!ov.custom) throw PreconditionError("eval_ratio: Custom ratio without a function");
      return ov.custom(tau);
    case RatioKind::ModelRatio:
      break;
  }
  return eval_phi_eps(tau, p) / eval_psi(tau, p);
}

// ---------------------------------------------------------------------------

Nonlinearities::Nonlinearities(ModelParams p, ModelOverrides ov)
    : params_(p), ov_(std::move(ov)) {}

double Nonlinearities::phi(double u) const {
  return ov_.phi ? ov_.phi(u) : eval_phi_eps(u, params_);
}

double Nonlinearities::psi(double u) const { return ov_.psi ? ov_.psi(u) : eval_psi(u, params_); }

double Nonlinearities::dpsi(double u) const {
  if (ov_.psi) return numeric_slope(ov_.psi, u);
  if (u == 0.0) return params_.beta == 1.0 ? params_.psi_c : 0.0;
  return params_.psi_c * params_.beta * std::pow(u, params_.beta - 1.0);
}

double Nonlinearities::f(double u) const { return ov_.f ? ov_.f(u) : eval_f_eps(u, params_); }

double Nonlinearities::df(double u) const {
  if (ov_.f) return numeric_slope(ov_.f, u);
  const ModelParams& p = params_;
  const double chi = eps_cutoff(u, p.eps);
  const double core_slope =
      u == 0.0 ? 0.0 : -p.b * p.kappa * std::pow(u, p.kappa - 1.0);
  return chi * core_slope + eps_cutoff_slope(u, p.eps) * eval_f(u, p);
}

ModelOverrides heat_mode_overrides() {
  ModelOverrides ov;
  ov.ratio = RatioOverride::unit();
  ov.phi = [](double) { return 1.0; };
  ov.psi = [](double) { return 0.0; };
  ov.f = [](double) { return 0.0; };
  return ov;
}

// ---------------------------------------------------------------------------
// FunctionalTable

struct FunctionalTable::Data {
  ModelParams params;
  RatioOverride ratio;
  double s_min = 0.0;
  double s_max = 0.0;
  double tol = 0.0;
  std::vector<double> knots;
  std::vector<double> G;
  std::vector<double> Gp;
  std::vector<double> H;
  std::vector<double> rho;  // ratio at the knots (slope of Gp)
};

namespace {

struct KnotValues {
  double G = 0.0;
  double Gp = 0.0;
  double H = 0.0;
  double rho = 0.0;
};

// Cubic Hermite on [x0, x1] with Fritsch-Carlson limiting of the end slopes.
double hermite(double x0, double x1, double y0, double y1, double m0, double m1, double x) {
  const double h = x1 - x0;
  const double delta = (y1 - y0) / h;
  if (delta == 0.0) {
    m0 = 0.0;
    m1 = 0.0;
  } else {
    const double a = m0 / delta;
    const double b = m1 / delta;
    if (a >= 0.0 && b >= 0.0) {
      const double r = a * a + b * b;
      if (r > 9.0) {
        const double scale = 3.0 / std::sqrt(r);
        m0 = scale * a * delta;
        m1 = scale * b * delta;
      }
    }
  }
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * m1;
}

class TableBuilder {
 public:
  TableBuilder(const ModelParams& p, const RatioOverride& ov, double tol)
      : p_(p), ov_(ov), tol_(tol) {}

  double rho(double tau) const { return eval_ratio(tau, p_, ov_); }

  // Values at xb obtained by integrating from xa (either direction).
  KnotValues advance(double xa, const KnotValues& va, double xb) const {
    const double qtol = 1e-3 * tol_;
    KnotValues vb;
    vb.Gp = va.Gp + integrate_adaptive([this](double t) { return rho(t); }, xa, xb, qtol).value;
    vb.G = va.G + (xb - xa) * va.Gp +
           integrate_adaptive([this, xb](double t) { return (xb - t) * rho(t); }, xa, xb, qtol)
               .value;
    vb.H = va.H + integrate_adaptive([this](double t) { return t * rho(t); }, xa, xb, qtol).value;
    vb.rho = rho(xb);
    return vb;
  }

  bool interpolation_ok(double x0, const KnotValues& v0, double x1, const KnotValues& v1,
                        double xm, const KnotValues& vm) const {
    auto close = [this](double approx, double exact) {
      return std::abs(approx - exact) <= 0.5 * tol_ * std::max(1.0, std::abs(exact));
    };
    return close(hermite(x0, x1, v0.G, v1.G, v0.Gp, v1.Gp, xm), vm.G) &&
           close(hermite(x0, x1, v0.Gp, v1.Gp, v0.rho, v1.rho, xm), vm.Gp) &&
           close(hermite(x0, x1, v0.H, v1.H, x0 * v0.rho, x1 * v1.rho, xm), vm.H);
  }

  // Appends knots strictly after x0 up to and including x1 into `out`,
  // bisecting where interpolation misses the target. `forward` tells which
  // end carries the known values.
  void refine(double x0, const KnotValues& v0, double x1, const KnotValues& v1, int depth,
              std::vector<std::pair<double, KnotValues>>& out) const {
    const double xm = 0.5 * (x0 + x1);
    const KnotValues vm = advance(x0, v0, xm);
    if (depth >= 40 || interpolation_ok(x0, v0, x1, v1, xm, vm)) {
      out.emplace_back(x1, v1);
      return;
    }
    refine(x0, v0, xm, vm, depth + 1, out);
    refine(xm, vm, x1, v1, depth + 1, out);
  }

 private:
  const ModelParams& p_;
  const RatioOverride& ov_;
  double tol_;
};

std::vector<double> geometric_points(double from, double to, double per_decade, int min_pts) {
  const double decades = std::abs(std::log10(to / from));
  const int count = std::max(min_pts, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> pts(count + 1);
  const double ratio = std::pow(to / from, 1.0 / count);
  double x = from;
  for (int i = 0; i <= count; ++i, x *= ratio) pts[i] = x;
  pts.front() = from;
  pts.back() = to;
  return pts;
}

std::size_t locate(std::span<const double> knots, double s) {
  auto it = std::upper_bound(knots.begin(), knots.end(), s);
  std::size_t k = static_cast<std::size_t>(it - knots.begin());
  if (k == 0) return 0;
  return std::min(k - 1, knots.size() - 2);
}

}  // namespace

ZeroEndpointVerdict classify_zero_endpoint(const ModelParams& p, const RatioOverride& ov) {
  const double t1 = 1e-12;
  const double t2 = 1e-10;
  const double r1 = eval_ratio(t1, p, ov);
  const double r2 = eval_ratio(t2, p, ov);
  ZeroEndpointVerdict v;
  if (r1 > 0.0 && r2 > 0.0) v.order = -std::log(r2 / r1) / std::log(t2 / t1);
  v.Gp_finite = v.order < 1.0;
  v.G_finite = v.order < 2.0;
  return v;
}

FunctionalTable build_table(const ModelParams& p, const RatioOverride& ov, double s_min,
                            double s_max, double tol) {
  if (!(s_min > 0.0 && s_min < p.s0 && p.s0 < s_max))
    throw PreconditionError("build_table: requires 0 < s_min < s0 < s_max");
  if (!(tol > 0.0)) throw PreconditionError("build_table: tol must be > 0");
  if (ov.tag == RatioKind::Custom && !ov.custom)
    throw PreconditionError("build_table: Custom ratio without a function");

  auto data = std::make_shared<FunctionalTable::Data>();
  data->params = p;
  data->ratio = ov;
  data->s_min = s_min;
  data->s_max = s_max;
  data->tol = tol;

  TableBuilder builder(data->params, data->ratio, tol);
  const double s0 = p.s0;
  constexpr double kPerDecade = 24.0;

  try {
    KnotValues at_s0;
    at_s0.rho = builder.rho(s0);

    // Right branch marches outward from s0.
    std::vector<std::pair<double, KnotValues>> right;
    right.emplace_back(s0, at_s0);
    auto rpts = geometric_points(s0, s_max, kPerDecade, 8);
    for (std::size_t i = 1; i < rpts.size(); ++i) {
      const auto [x0, v0] = right.back();
      const KnotValues v1 = builder.advance(x0, v0, rpts[i]);
      builder.refine(x0, v0, rpts[i], v1, 0, right);
    }

    // Left branch marches inward from s0 toward s_min.
    std::vector<std::pair<double, KnotValues>> left;
    left.emplace_back(s0, at_s0);
    auto lpts = geometric_points(s0, s_min, kPerDecade, 8);
    for (std::size_t i = 1; i < lpts.size(); ++i) {
      const auto [x0, v0] = left.back();
      const KnotValues v1 = builder.advance(x0, v0, lpts[i]);
      builder.refine(x0, v0, lpts[i], v1, 0, left);
    }

    for (auto it = left.rbegin(); it != left.rend(); ++it) {
      if (it->first == s0) continue;
      data->knots.push_back(it->first);
      data->G.push_back(it->second.G);
      data->Gp.push_back(it->second.Gp);
      data->H.push_back(it->second.H);
      data->rho.push_back(it->second.rho);
    }
    for (const auto& [x, v] : right) {
      data->knots.push_back(x);
      data->G.push_back(v.G);
      data->Gp.push_back(v.Gp);
      data->H.push_back(v.H);
      data->rho.push_back(v.rho);
    }
  } catch (const QuadratureError& err) {
    const ZeroEndpointVerdict verdict = classify_zero_endpoint(p, ov);
    std::ostringstream msg;
    msg << err.what() << "; ratio ~ tau^(-" << verdict.order << ") at 0+: G' "
        << (verdict.Gp_finite ? "integrable" : "non-integrable") << ", G "
        << (verdict.G_finite ? "integrable" : "non-integrable");
    throw QuadratureError(msg.str());
  }

  for (std::size_t i = 0; i < data->knots.size(); ++i) {
    if (!std::isfinite(data->G[i]) || !std::isfinite(data->Gp[i]) || !std::isfinite(data->H[i]))
      throw QuadratureError("build_table: non-finite potential at knot");
  }

  FunctionalTable table;
  table.data_ = std::move(data);
  return table;
}

double FunctionalTable::s_min() const { return data_->s_min; }
double FunctionalTable::s_max() const { return data_->s_max; }
double FunctionalTable::s0() const { return data_->params.s0; }
double FunctionalTable::tol() const { return data_->tol; }
std::span<const double> FunctionalTable::knots() const { return data_->knots; }
const ModelParams& FunctionalTable::params() const { return data_->params; }
const RatioOverride& FunctionalTable::ratio() const { return data_->ratio; }

namespace {

void require_in_range(const FunctionalTable::Data& d, double s) {
  if (!(s >= d.s_min && s <= d.s_max)) {
    std::ostringstream msg;
    msg << "FunctionalTable: s = " << s << " outside [" << d.s_min << ", " << d.s_max << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double FunctionalTable::G(double s) const {
  const Data& d = *data_;
  require_in_range(d, s);
  const std::size_t k = locate(d.knots, s);
  return hermite(d.knots[k], d.knots[k + 1], d.G[k], d.G[k + 1], d.Gp[k], d.Gp[k + 1], s);
}

double FunctionalTable::Gp(double s) const {
  const Data& d = *data_;
  require_in_range(d, s);
  const std::size_t k = locate(d.knots, s);
  return hermite(d.knots[k], d.knots[k + 1], d.Gp[k], d.Gp[k + 1], d.rho[k], d.rho[k + 1], s);
}

double FunctionalTable::H(double s) const {
  const Data& d = *data_;
  require_in_range(d, s);
  const std::size_t k = locate(d.knots, s);
  const double x0 = d.knots[k];
  const double x1 = d.knots[k + 1];
  return hermite(x0, x1, d.H[k], d.H[k + 1], x0 * d.rho[k], x1 * d.rho[k + 1], s);
}

FunctionalTable FunctionalTable::extended_to(double s) const {
  if (covers(s)) return *this;
  double smax = s_max();
  while (smax < s) smax *= 2.0;
  return build_table(params(), ratio(), s_min(), smax, tol());
}

// ---------------------------------------------------------------------------

bool check_damping_threshold(const ModelParams& p, int n) {
  if (n < 1) throw PreconditionError("check_damping_threshold: n must be >= 1");
  return p.kappa < p.beta + 2.0 / n;
}

namespace {

template <class Violation>
ConditionReport sample_condition(double lo, double hi, int samples, double tolerance,
                                 Violation&& violation) {
  ConditionReport rep;
  rep.tolerance = tolerance;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  if (!(hi > lo)) {
    rep.max_violation = violation(lo);
    rep.witness = lo;
  } else {
    const double ratio = std::pow(hi / lo, 1.0 / (samples - 1));
    double s = lo;
    for (int i = 0; i < samples; ++i, s *= ratio) {
      const double x = (i == samples - 1) ? hi : s;
      const double viol = violation(x);
      if (viol > rep.max_violation) {
        rep.max_violation = viol;
        rep.witness = x;
      }
    }
  }
  rep.holds = rep.max_violation <= tolerance;
  return rep;
}

}  // namespace

ConditionReport check_growth_condition(const FunctionalTable& table, int n, double k,
                                       double theta_or_alpha, int samples,
                                       std::optional<double> s_upper) {
  if (samples < 10) throw PreconditionError("check_growth_condition: samples must be >= 10");
  if (n < 2) throw PreconditionError("check_growth_condition: n must be >= 2");
  if (n == 2 && !(theta_or_alpha > 0.0 && theta_or_alpha < 1.0))
    throw PreconditionError("check_growth_condition: theta must lie in (0, 1)");
  if (n >= 3 && !(theta_or_alpha > 2.0 / n))
    throw PreconditionError("check_growth_condition: alpha' must exceed 2/n");

  const double lo = table.s0();
  const double hi = std::min(s_upper.value_or(table.s_max()), table.s_max());
  const double tolerance = 10.0 * table.tol();
  auto bound = [&](double s) {
    if (n == 2) return k * s * std::pow(std::max(std::log(s), 0.0), theta_or_alpha);
    return k * std::pow(s, 2.0 - theta_or_alpha);
  };
  ConditionReport rep = sample_condition(lo, std::max(lo, hi), samples, tolerance,
                                         [&](double s) { return table.G(s) - bound(s); });
  rep.detail = n == 2 ? "G(s) <= k s (ln s)^theta" : "G(s) <= k s^(2 - alpha')";
  return rep;
}

ConditionReport check_eps_condition(const FunctionalTable& table, int n, double eps_c, double K,
                                    int samples, std::optional<double> s_upper) {
  if (n < 3) throw PreconditionError("check_eps_condition: n must be >= 3");
  if (!(eps_c > 0.0 && eps_c < 1.0))
    throw PreconditionError("check_eps_condition: eps_c must lie in (0, 1)");
  if (samples < 2) throw PreconditionError("check_eps_condition: samples must be >= 2");
  const double coef = (n - 2.0 - eps_c) / n;
  const double lo = table.s0();
  const double hi = std::min(s_upper.value_or(table.s_max()), table.s_max());
  ConditionReport rep = sample_condition(
      lo, std::max(lo, hi), samples, 10.0 * table.tol(),
      [&](double s) { return table.H(s) - (coef * table.G(s) + K * s); });
  rep.detail = "H(s) <= ((n-2-eps)/n) G(s) + K s";
  return rep;
}

}  // namespace kslog

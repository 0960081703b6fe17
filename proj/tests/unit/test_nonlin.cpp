#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "kslog/errors.hpp"
#include "kslog/nonlin.hpp"
#include "kslog/quadrature.hpp"

using namespace kslog;

namespace {

// Independent oracle: recursive adaptive Simpson.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40);
}

}  // namespace

TEST_CASE("phi, psi, f at hand-checked points") {
  ModelParams p;
  const double e = std::numbers::e;
  CHECK(eval_phi(0.0, p) == 0.0);
  CHECK(eval_phi(e - 1.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  p.alpha = 3;
  CHECK(eval_phi(e * e - 1.0, p) == doctest::Approx(8.0).epsilon(1e-14));

  p = {};
  p.alpha = 2;
  p.eps = e - 1.0;
  CHECK(eval_phi_eps(0.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  p = {};
  p.eps = 0.5;
  CHECK(eval_phi_eps(1.0, p) == doctest::Approx(std::log(2.5)).epsilon(1e-15));
  p.eps = 0.0;
  CHECK(eval_phi_eps(1.7, p) == eval_phi(1.7, p));

  p = {};
  p.beta = 2;
  CHECK(eval_psi(2.0, p) == 4.0);
  CHECK(eval_psi(0.0, p) == 0.0);
  p.beta = 1.5;
  p.psi_c = 2;
  CHECK(eval_psi(3.0, p) == doctest::Approx(2.0 * std::pow(3.0, 1.5)).epsilon(1e-15));

  p = {};
  p.a = 2;
  p.b = 0.5;
  p.kappa = 3;
  CHECK(eval_f(0.0, p) == 2.0);
  CHECK(std::abs(eval_f(std::cbrt(4.0), p)) < 1e-14);
  p = {};
  CHECK(eval_f(3.0, p) == -9.0);

  CHECK_THROWS_AS(eval_phi(-1e-3, p), DomainError);
  CHECK_THROWS_AS(eval_psi(-1.0, p), DomainError);
  CHECK_THROWS_AS(eval_f(-1.0, p), DomainError);
}

TEST_CASE("phi is nondecreasing in u and eps") {
  ModelParams p;
  p.alpha = 2;
  double prev = -1.0;
  for (double u = 0.0; u < 50.0; u += 0.37) {
    const double x = eval_phi(u, p);
    CHECK(x >= prev);
    prev = x;
  }
  ModelParams q = p;
  q.eps = 0.1;
  for (double u : {0.0, 0.5, 3.0}) CHECK(eval_phi_eps(u, q) >= eval_phi_eps(u, p));
}

TEST_CASE("eps cutoff is 1 below 1/(2 eps), 0 above 1/eps") {
  const double eps = 0.01;
  CHECK(eps_cutoff(0.0, eps) == 1.0);
  CHECK(eps_cutoff(50.0, eps) == 1.0);
  CHECK(eps_cutoff(100.0, eps) == 0.0);
  CHECK(eps_cutoff(1e6, eps) == 0.0);
  double prev = 1.0;
  for (double u = 50.0; u <= 100.0; u += 0.5) {
    const double c = eps_cutoff(u, eps);
    CHECK(c <= prev);
    CHECK(c >= 0.0);
    prev = c;
  }
  CHECK(eps_cutoff(1e9, 0.0) == 1.0);
  ModelParams p;
  p.eps = eps;
  CHECK(eval_f_eps(10.0, p) == eval_f(10.0, p));
  CHECK(eval_f_eps(200.0, p) == 0.0);
}

TEST_CASE("ratio values") {
  ModelParams p;
  CHECK(eval_ratio(3.7, p, RatioOverride::unit()) == 1.0);
  const double e = std::numbers::e;
  CHECK(eval_ratio(e - 1.0, p, RatioOverride::model()) == doctest::Approx(1.0 / (e - 1.0)).epsilon(1e-15));
  p.alpha = 2;
  p.beta = 2;
  p.eps = 0.1;
  const long double l = std::log(3.1L);
  const double oracle = static_cast<double>(l * l / 4.0L);
  CHECK(std::abs(eval_ratio(2.0, p, RatioOverride::model()) - oracle) <= 1e-14 * oracle);
  CHECK_THROWS_AS(eval_ratio(0.0, p, RatioOverride::model()), DomainError);
  CHECK_THROWS_AS(eval_ratio(1.0, p, RatioOverride{RatioKind::Custom, {}}), PreconditionError);
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0).value -
                 2.0 / 3.0) <= 1e-10);
  CHECK(integrate_adaptive([](double x) { return std::cos(x); }, 1.0, 0.0).value ==
        doctest::Approx(-std::sin(1.0)).epsilon(1e-14));
  CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0), QuadratureError);
}

TEST_CASE("unit ratio tables reproduce the closed forms") {
  ModelParams p;
  const FunctionalTable t = build_table(p, RatioOverride::unit(), 1e-8, 100.0, 1e-10);
  CHECK(t.G(3.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(t.H(3.0) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(t.Gp(3.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(t.G(1.0) == 0.0);
  CHECK(t.H(1.0) == 0.0);
  CHECK(t.Gp(1.0) == 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(1e-8, 100.0);
  for (int k = 0; k < 100; ++k) {
    const double s = dist(rng);
    CHECK(std::abs(t.G(s) - 0.5 * (s - 1.0) * (s - 1.0)) <= 1e-8);
    CHECK(std::abs(t.H(s) - 0.5 * (s * s - 1.0)) <= 1e-8);
    CHECK(std::abs(t.Gp(s) - (s - 1.0)) <= 1e-8);
  }
}

TEST_CASE("model ratio G matches a nested Simpson oracle") {
  ModelParams p;
  p.alpha = 1;
  p.beta = 2;
  p.eps = 0;
  p.s0 = 1;
  const FunctionalTable t = build_table(p, RatioOverride::model(), 1e-8, 100.0, 1e-10);
  auto rho = [&](double tau) { return eval_ratio(tau, p, RatioOverride::model()); };
  auto inner = [&](double sigma) { return simpson(rho, 1.0, sigma, 1e-13); };
  const double oracle = simpson(inner, 1.0, 5.0, 1e-11);
  CHECK(std::abs(t.G(5.0) - oracle) <= 1e-10 * std::max(1.0, oracle));
  const double H_oracle = simpson([&](double s) { return s * rho(s); }, 1.0, 5.0, 1e-12);
  CHECK(std::abs(t.H(5.0) - H_oracle) <= 1e-10 * std::max(1.0, H_oracle));
}

TEST_CASE("table properties") {
  ModelParams p;
  p.alpha = 2;
  p.beta = 1.5;
  p.eps = 0.05;
  p.s0 = 2.0;
  const FunctionalTable t = build_table(p, RatioOverride::model(), 1e-6, 1e3, 1e-10);
  for (double s = 1e-6; s < 1e3; s *= 1.7) {
    CHECK(t.G(s) >= -1e-12);
    if (s >= p.s0) CHECK(t.H(s) - p.s0 * t.Gp(s) >= -1e-10);
  }
  CHECK(t.G(2.0) == 0.0);

  // G' against centered differences: second order in the spacing.
  const double s = 7.3;
  const double e1 = std::abs((t.G(s + 1e-2) - t.G(s - 1e-2)) / 2e-2 - t.Gp(s));
  const double e2 = std::abs((t.G(s + 5e-3) - t.G(s - 5e-3)) / 1e-2 - t.Gp(s));
  CHECK(e2 < e1);
  CHECK(e1 < 1e-5);

  CHECK_THROWS_AS(t.G(2e3), DomainError);
  const FunctionalTable big = t.extended_to(3e3);
  CHECK(big.s_max() >= 3e3);
  CHECK(big.G(2e3) > big.G(1e3));
  CHECK(big.G(500.0) == doctest::Approx(t.G(500.0)).epsilon(1e-9));

  CHECK_THROWS_AS(build_table(p, RatioOverride::model(), 3.0, 10.0), PreconditionError);
  CHECK_THROWS_AS(build_table(p, RatioOverride::model(), 1e-8, 1.5), PreconditionError);
}

TEST_CASE("zero endpoint classification") {
  ModelParams p;
  p.beta = 2;
  const ZeroEndpointVerdict v = classify_zero_endpoint(p, RatioOverride::model());
  CHECK(v.order == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_FALSE(v.Gp_finite);
  CHECK(v.G_finite);
  CHECK(classify_zero_endpoint(p, RatioOverride::unit()).order == doctest::Approx(0.0));
}

TEST_CASE("damping threshold") {
  ModelParams p;
  p.beta = 2;
  p.kappa = 2;
  CHECK(check_damping_threshold(p, 2));
  p.beta = 1;
  p.kappa = 4;
  CHECK_FALSE(check_damping_threshold(p, 2));
  p.beta = 3;
  p.kappa = 3.0 + 2.0 / 3.0;
  CHECK_FALSE(check_damping_threshold(p, 3));
}

TEST_CASE("growth condition") {
  ModelParams p;
  const FunctionalTable unit = build_table(p, RatioOverride::unit(), 1e-8, 1e3);
  const ConditionReport bad = check_growth_condition(unit, 2, 5.0, 0.5, 200);
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness);
  const double s = *bad.witness;
  CHECK(bad.max_violation == doctest::Approx(0.5 * (s - 1) * (s - 1) - 5.0 * s * std::sqrt(std::log(s))).epsilon(1e-8));

  const FunctionalTable inv = build_table(
      p, RatioOverride::from([](double t) { return 1.0 / (t * t); }), 0.5, 1e3);
  CHECK(check_growth_condition(inv, 2, 1.0, 0.9, 200).holds);
  CHECK(check_growth_condition(unit, 2, 1.0, 0.5, 50, 1.0).holds);
}

TEST_CASE("eps condition") {
  ModelParams p;
  const FunctionalTable unit = build_table(p, RatioOverride::unit(), 1e-8, 1e3);
  CHECK(check_eps_condition(unit, 4, 0.5, 10.0, 200, 10.0).holds);
  CHECK_FALSE(check_eps_condition(unit, 3, 0.99, 0.0, 200).holds);
  CHECK(check_eps_condition(unit, 3, 0.5, 1.0, 10, 1.0).holds);
}

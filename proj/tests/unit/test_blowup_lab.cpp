#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kslog/blowup_lab.hpp"
#include "kslog/discrete.hpp"
#include "kslog/energy.hpp"
#include "kslog/errors.hpp"

using namespace kslog;

namespace {

const double kPi = std::numbers::pi;

ModelParams disk_params() {
  ModelParams p;
  p.alpha = 1;
  p.beta = 2;
  p.eps = 0;
  p.s0 = 1.5;
  return p;
}

FamilyParams disk_family() {
  FamilyParams fp;
  fp.beta = 2;
  fp.mass = 50;
  fp.theta = 0.5;
  fp.kappa_prime = 0.25;
  fp.growth_k = 10;
  return fp;
}

Grid disk(int cells) { return Grid({DomainKind::RadialBall, 1.0, 2, cells}); }

}  // namespace

TEST_CASE("A integral closed forms") {
  CHECK(A_integral(2, 4) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(A_integral(1, 2) == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(A_integral(3, 4) == doctest::Approx(kPi / 4).epsilon(1e-10));
  CHECK(A_integral(2, 3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(A_integral(2, 2), DomainError);
  CHECK_THROWS_AS(A_integral(0, 1), DomainError);
}

TEST_CASE("radial moments and the scaling substitution") {
  // int_0^X s (s^2 + 1)^(-3/2) ds = 1 - (X^2 + 1)^(-1/2)
  for (double eta : {0.3, 0.05, 1e-3, 1e-5}) {
    const double X = 1.0 / eta;
    const double scaled = radial_moment(2, 3, 1.0, eta) * std::pow(eta, 3 - 2);
    CHECK(scaled == doctest::Approx(1.0 - 1.0 / std::sqrt(X * X + 1.0)).epsilon(1e-10));
  }
  // n = 3, lambda = 4 tends to A(3, 4) as eta -> 0
  const double eta = 1e-6;
  CHECK(radial_moment(3, 4, 1.0, eta) * eta == doctest::Approx(A_integral(3, 4)).epsilon(1e-5));
}

TEST_CASE("normalizer closed form in the disk") {
  FamilyParams fp = disk_family();
  for (double eta : {0.2, 0.05, 0.01}) {
    fp.eta = eta;
    const double closed = fp.mass / (2.0 * kPi * 0.5 * std::log((1.0 + eta * eta) / (eta * eta)));
    CHECK(a_eta(fp, {DomainKind::RadialBall, 1.0, 2, 64}) == doctest::Approx(closed).epsilon(1e-10));
  }
  CHECK_THROWS_AS(a_eta(fp, {DomainKind::Interval1D, 1.0, 1, 64}), PreconditionError);
}

TEST_CASE("family fields") {
  const Grid g = disk(256);
  FamilyParams fp = disk_family();
  for (double eta : {0.2, 0.1, 0.05}) {
    fp.eta = eta;
    const Field u = u_eta_field(fp, g);
    const Field v = v_eta_field(fp, g, 2);
    CHECK(integrate(u, g) == doctest::Approx(fp.mass).epsilon(1e-12));
    // the discrete normalizer tracks the continuous one
    CHECK(discrete_a_eta(fp, g) == doctest::Approx(a_eta(fp, g.spec())).epsilon(1e-2));
    for (int i = 1; i < g.cells(); ++i) {
      CHECK(u[i] < u[i - 1]);
      CHECK(v[i] <= v[i - 1]);
    }
    const double L = std::log(1.0 / eta);
    const double pre = std::pow(L, -fp.kappa_prime);
    CHECK(min_value(v) >= 0.0);
    CHECK(v[g.cells() - 1] <= pre * 2.0 * g.h());
    CHECK(v[0] == doctest::Approx(pre * std::log(1.0 / (g.centers()[0] * g.centers()[0] + eta * eta))));

    // int |grad v|^2 <= 8 pi L^(-2 kappa') (1 + L)
    const std::vector<double> gv = grad_faces(v, g);
    auto area = g.face_area();
    double energy = 0.0;
    for (int f = 1; f < g.cells(); ++f) energy += area[f] * g.h() * gv[f] * gv[f];
    CHECK(energy <= 8.0 * kPi * std::pow(L, -2.0 * fp.kappa_prime) * (1.0 + L));
  }

  fp.eta = 0.6;
  CHECK_THROWS_AS(v_eta_field(fp, g, 2), PreconditionError);
  fp.eta = 0.1;
  fp.kappa_prime = 0.5;
  CHECK_THROWS_AS(v_eta_field(fp, g, 2), PreconditionError);
  fp.kappa_prime = 0.25;
  CHECK_THROWS_AS(v_eta_field(fp, g, 3), UsageError);

  const Grid ball({DomainKind::RadialBall, 1.0, 3, 64});
  fp.delta = 1.5;
  fp.gamma = 1.0;
  const Field v3 = v_eta_field(fp, ball, 3);
  const double r0 = ball.centers()[0];
  CHECK(v3[0] == doctest::Approx(std::pow(0.1, 0.5) * std::pow(r0 * r0 + 0.01, -0.75)));
}

TEST_CASE("family scan") {
  const Grid g = disk(256);
  const FunctionalTable t = build_table(disk_params(), RatioOverride::model(), 1e-8, 100.0);
  const FamilyParams fp = disk_family();
  const FamilyScan one = family_scan(fp, {0.1}, g, t);
  CHECK_FALSE(one.strictly_decreasing.has_value());
  REQUIRE(one.F.size() == 1);

  const FamilyScan scan = family_scan(fp, {0.2, 0.1, 0.05}, g, t);
  REQUIRE(scan.strictly_decreasing.has_value());
  CHECK(*scan.strictly_decreasing);
  CHECK(scan.F[2] < scan.F[1]);
  CHECK(scan.F[1] < scan.F[0]);

  // agrees with a direct evaluation
  FamilyParams member = fp;
  member.eta = 0.1;
  const State s{u_eta_field(member, g), v_eta_field(member, g, 2), 0.0};
  const FunctionalTable wide = t.extended_to(linf(s.u));
  CHECK(scan.F[1] == doctest::Approx(lyapunov_F(s, g, wide).F_total).epsilon(1e-9));

  CHECK_THROWS_AS(family_scan(fp, {0.1, 0.2}, g, t), PreconditionError);
}

TEST_CASE("divergence exponent fit recovers synthetic data") {
  FamilyScan s;
  for (double eta : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    const double L = std::log(1.0 / eta);
    s.eta.push_back(eta);
    s.F.push_back(-(3.0 * std::pow(L, 0.75) + 2.0));
  }
  CHECK(fitted_divergence_exponent(s, 1.0) == doctest::Approx(0.75).epsilon(1e-6));
  s.eta.resize(2);
  s.F.resize(2);
  CHECK_THROWS_AS(fitted_divergence_exponent(s, 1.0), PreconditionError);
}

TEST_CASE("initial data below a level") {
  const FunctionalTable t = build_table(disk_params(), RatioOverride::model(), 1e-8, 100.0);
  const FamilyParams fp = disk_family();
  const Grid g = disk(512);

  const InitialData first = find_initial_below(10, fp, g, t);
  CHECK(first.eta == doctest::Approx(0.2));
  CHECK(first.F < -10);

  const InitialData deeper = find_initial_below(50, fp, g, t);
  CHECK(deeper.eta == doctest::Approx(0.05));
  CHECK(deeper.F < -50);
  CHECK(integrate(deeper.u, g) == doctest::Approx(50.0).epsilon(1e-12));

  CHECK_THROWS_AS(find_initial_below(1e6, fp, disk(64), t), ResolutionError);
  CHECK_THROWS_AS(find_initial_below(-1, fp, g, t), PreconditionError);
}

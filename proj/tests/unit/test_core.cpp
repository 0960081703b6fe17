#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kslog/core.hpp"
#include "kslog/errors.hpp"

using namespace kslog;

TEST_CASE("unit sphere areas") {
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("interval grid is a uniform partition of [0, 2R]") {
  const Grid g({DomainKind::Interval1D, 0.5, 1, 10});
  CHECK(g.h() == doctest::Approx(0.1));
  for (double v : g.cell_volume()) CHECK(v == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(g.face_pos().back() == 1.0);
  CHECK(g.centers()[0] == doctest::Approx(0.05));
  CHECK(g.measure() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("radial cell volumes add up to the ball") {
  const Grid disk({DomainKind::RadialBall, 1.0, 2, 64});
  CHECK(std::abs(disk.measure() - std::numbers::pi) <= 1e-12);
  const Grid ball({DomainKind::RadialBall, 1.0, 3, 64});
  CHECK(std::abs(ball.measure() - 4.0 * std::numbers::pi / 3.0) <= 1e-12);
  CHECK(disk.face_area()[0] == 0.0);
  CHECK(disk.face_area()[64] == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(disk.h() == doctest::Approx(1.0 / 64));
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(Grid({DomainKind::Interval1D, 0.5, 1, 4}), ConfigError);
  CHECK_THROWS_AS(Grid({DomainKind::RadialBall, 1.0, 1, 16}), ConfigError);
  CHECK_THROWS_AS(Grid({DomainKind::Interval1D, -1.0, 1, 16}), ConfigError);
  CHECK_THROWS_AS(Grid({DomainKind::Interval1D, 0.5, 2, 16}), ConfigError);
}

TEST_CASE("model parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.kappa = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.s0 = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.eps = -1e-3;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("integrate, linf, min") {
  const Grid disk({DomainKind::RadialBall, 1.0, 2, 64});
  CHECK(integrate(make_field(disk, 3.0), disk) == doctest::Approx(3.0 * std::numbers::pi));
  CHECK(integrate(make_field(disk), disk) == 0.0);
  CHECK(linf(make_field(disk, 3.0)) == 3.0);
  Field alt = make_field(disk);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 ? -2.0 : 2.0);
  CHECK(linf(alt) == 2.0);
  CHECK(min_value(alt) == -2.0);
  alt[3] = std::nan("");
  CHECK_FALSE(all_finite(alt));
}

TEST_CASE("fields remember their grid") {
  const Grid a({DomainKind::Interval1D, 0.5, 1, 16});
  const Grid b({DomainKind::Interval1D, 0.5, 1, 32});
  const Grid a2({DomainKind::Interval1D, 0.5, 1, 16});
  CHECK(a.id() == a2.id());
  CHECK(a.id() != b.id());
  const Field f = make_field(a, 1.0);
  CHECK_NOTHROW(require_on_grid(f, a2));
  CHECK_THROWS_AS(require_on_grid(f, b), UsageError);
  CHECK_THROWS_AS(integrate(f, b), UsageError);
}

TEST_CASE("sample_field evaluates at cell centers") {
  const Grid g({DomainKind::Interval1D, 0.5, 1, 10});
  const Field f = sample_field(g, [](double x) { return 2.0 * x; });
  CHECK(f[0] == doctest::Approx(0.1));
  CHECK(f[9] == doctest::Approx(1.9));
  CHECK(f.grid_id == g.id());
}

#include "kslog/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kslog/errors.hpp"

namespace kslog {

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("ModelParams: " + what); };
  if (!(alpha >= 1.0)) fail("alpha must be >= 1");
  if (!(beta >= 1.0)) fail("beta must be >= 1");
  if (!(kappa >= 2.0)) fail("kappa must be >= 2");
  if (!(a >= 0.0)) fail("a must be >= 0");
  if (!(b > 0.0)) fail("b must be > 0");
  if (!(eps >= 0.0)) fail("eps must be >= 0");
  if (!(s0 > 0.0)) fail("s0 must be > 0");
  if (!(psi_c > 0.0)) fail("psi_c must be > 0");
}

void DomainSpec::validate() const {
  if (cells < 8) throw ConfigError("DomainSpec: cells must be >= 8, got " + std::to_string(cells));
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("DomainSpec: R must be positive and finite");
  if (kind == DomainKind::RadialBall && n < 2)
    throw ConfigError("DomainSpec: a radial ball needs dimension n >= 2");
  if (kind == DomainKind::Interval1D && n != 1)
    throw ConfigError("DomainSpec: Interval1D requires n = 1");
}

double unit_sphere_area(int n) {
  const double half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double domain_measure(const DomainSpec& spec) {
  if (spec.kind == DomainKind::Interval1D) return 2.0 * spec.R;
  return unit_sphere_area(spec.n) * std::pow(spec.R, spec.n) / spec.n;
}

namespace {

// FNV-1a over the raw bytes of the defining quantities.
std::uint64_t checksum(const DomainSpec& s) {
  std::uint64_t hash = 1469598103934665603ULL;
  auto mix = [&hash](std::uint64_t word) {
    for (int k = 0; k < 8; ++k) {
      hash ^= (word >> (8 * k)) & 0xffU;
      hash *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(s.kind));
  mix(std::bit_cast<std::uint64_t>(s.R));
  mix(static_cast<std::uint64_t>(s.n));
  mix(static_cast<std::uint64_t>(s.cells));
  return hash;
}

}  // namespace

Grid::Grid(const DomainSpec& spec) : spec_(spec) {
  spec_.validate();
  const int nc = spec_.cells;
  const double length = radial() ? spec_.R : 2.0 * spec_.R;
  h_ = length / nc;

  face_pos_.resize(nc + 1);
  for (int i = 0; i <= nc; ++i) face_pos_[i] = i * h_;
  face_pos_[nc] = length;

  centers_.resize(nc);
  for (int i = 0; i < nc; ++i) centers_[i] = (i + 0.5) * h_;

  face_area_.assign(nc + 1, 1.0);
  cell_volume_.assign(nc, h_);
  if (radial()) {
    const int n = spec_.n;
    const double omega = unit_sphere_area(n);
    for (int i = 0; i <= nc; ++i) face_area_[i] = omega * std::pow(face_pos_[i], n - 1);
    face_area_[0] = 0.0;
    for (int i = 0; i < nc; ++i) {
      cell_volume_[i] =
          omega * (std::pow(face_pos_[i + 1], n) - std::pow(face_pos_[i], n)) / n;
    }
  }
  id_ = checksum(spec_);
}

double Grid::measure() const {
  double total = 0.0;
  for (double vol : cell_volume_) total += vol;
  return total;
}

Grid make_grid(const DomainSpec& spec) { return Grid(spec); }

Field make_field(const Grid& g, double fill) {
  return Field{std::vector<double>(g.cells(), fill), g.id()};
}

void require_on_grid(const Field& f, const Grid& g) {
  if (f.grid_id != g.id() || f.values.size() != static_cast<std::size_t>(g.cells()))
    throw UsageError("field does not live on this grid");
}

double integrate(const Field& f, const Grid& g) {
  require_on_grid(f, g);
  auto vol = g.cell_volume();
  double total = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) total += f.values[i] * vol[i];
  return total;
}

double linf(const Field& f) {
  double m = 0.0;
  for (double x : f.values) m = std::max(m, std::abs(x));
  return m;
}

double min_value(const Field& f) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : f.values) m = std::min(m, x);
  return m;
}

bool all_finite(const Field& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace kslog

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kslog {

/// Exponents and coefficients of the chemotaxis model
///
///   u_t = div(phi_eps(u) grad u) - div(psi(u) grad v) + f_eps(u)
///   v_t = lap v - v + u
///
/// with phi_eps(u) = ln^alpha(1 + u + eps), psi(u) = psi_c u^beta and
/// f(u) = a - b u^kappa. s0 anchors the Lyapunov functional.
struct ModelParams {
  double alpha = 1.0;
  double beta = 1.0;
  double kappa = 2.0;
  double a = 0.0;
  double b = 1.0;
  double eps = 0.0;
  double s0 = 1.0;
  double psi_c = 1.0;

  /// Throws ConfigError when a structural bound is violated.
  void validate() const;
};

enum class DomainKind { Interval1D, RadialBall };

/// Interval1D covers x in [0, 2R]; RadialBall is the ball of radius R in
/// R^n reduced to the radial coordinate r in [0, R].
struct DomainSpec {
  DomainKind kind = DomainKind::Interval1D;
  double R = 0.5;
  int n = 1;
  int cells = 64;

  void validate() const;
};

/// Surface area of the unit sphere in R^n (2 for n = 1).
double unit_sphere_area(int n);

/// Lebesgue measure of the domain described by `spec`.
double domain_measure(const DomainSpec& spec);

/// Cell-centered finite-volume grid. Faces are indexed 0..cells with face i
/// the left/inner boundary of cell i. Immutable after construction.
class Grid {
 public:
  explicit Grid(const DomainSpec& spec);

  const DomainSpec& spec() const { return spec_; }
  int cells() const { return spec_.cells; }
  int faces() const { return spec_.cells + 1; }
  double h() const { return h_; }
  bool radial() const { return spec_.kind == DomainKind::RadialBall; }

  std::span<const double> face_pos() const { return face_pos_; }
  std::span<const double> centers() const { return centers_; }
  std::span<const double> face_area() const { return face_area_; }
  std::span<const double> cell_volume() const { return cell_volume_; }

  /// Sum of cell volumes (equals the domain measure to rounding).
  double measure() const;

  /// Stable checksum of the geometry, used to tag fields.
  std::uint64_t id() const { return id_; }

 private:
  DomainSpec spec_;
  double h_ = 0.0;
  std::vector<double> face_pos_;
  std::vector<double> centers_;
  std::vector<double> face_area_;
  std::vector<double> cell_volume_;
  std::uint64_t id_ = 0;
};

Grid make_grid(const DomainSpec& spec);

/// Per-cell samples tagged with the id of the grid they live on.
struct Field {
  std::vector<double> values;
  std::uint64_t grid_id = 0;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// Zero-initialized field on `g`.
Field make_field(const Grid& g, double fill = 0.0);

/// Field sampled from a function of the cell-center coordinate.
template <class Fn>
Field sample_field(const Grid& g, Fn&& fn) {
  Field f = make_field(g);
  auto xc = g.centers();
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(xc[i]);
  return f;
}

struct State {
  Field u;
  Field v;
  double t = 0.0;
};

/// Throws UsageError unless `f` was built on `g` with matching length.
void require_on_grid(const Field& f, const Grid& g);

/// Midpoint rule on exact cell volumes: sum f_i V_i.
double integrate(const Field& f, const Grid& g);

double linf(const Field& f);

/// Minimum cell value (+inf for an empty field).
double min_value(const Field& f);

bool all_finite(const Field& f);

}  // namespace kslog

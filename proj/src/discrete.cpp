#include "kslog/discrete.hpp"

#include <sstream>

#include "kslog/errors.hpp"

namespace kslog {

std::vector<double> grad_faces(const Field& f, const Grid& g) {
  require_on_grid(f, g);
  const int nc = g.cells();
  const double inv_h = 1.0 / g.h();
  std::vector<double> grad(nc + 1, 0.0);
  for (int i = 1; i < nc; ++i) grad[i] = (f.values[i] - f.values[i - 1]) * inv_h;
  return grad;
}

Field div_cells(const FaceFlux& F, const Grid& g) {
  if (F.values.size() != static_cast<std::size_t>(g.faces()))
    throw UsageError("div_cells: flux length does not match the grid's faces");
  auto area = g.face_area();
  auto vol = g.cell_volume();
  Field out = make_field(g);
  for (int i = 0; i < g.cells(); ++i) {
    out.values[i] = (area[i + 1] * F.values[i + 1] - area[i] * F.values[i]) / vol[i];
  }
  return out;
}

FaceFlux diffusive_flux(const Field& u, const Grid& g, const Nonlinearities& model) {
  require_on_grid(u, g);
  const int nc = g.cells();
  const double inv_h = 1.0 / g.h();
  FaceFlux F{std::vector<double>(nc + 1, 0.0)};
  for (int i = 0; i < nc; ++i) {
    if (!(u.values[i] >= 0.0)) {
      std::ostringstream msg;
      msg << "diffusive_flux: negative density " << u.values[i] << " in cell " << i;
      throw DomainError(msg.str());
    }
  }
  for (int i = 1; i < nc; ++i) {
    const double ul = u.values[i - 1];
    const double ur = u.values[i];
    F.values[i] = model.phi(0.5 * (ul + ur)) * (ur - ul) * inv_h;
  }
  return F;
}

FaceFlux diffusive_flux(const Field& u, const Grid& g, const ModelParams& p) {
  return diffusive_flux(u, g, Nonlinearities(p));
}

FaceFlux chemotactic_flux(const Field& u, const Field& v, const Grid& g,
                          const Nonlinearities& model) {
  require_on_grid(u, g);
  require_on_grid(v, g);
  const int nc = g.cells();
  const double inv_h = 1.0 / g.h();
  FaceFlux F{std::vector<double>(nc + 1, 0.0)};
  for (int i = 1; i < nc; ++i) {
    const double slope = (v.values[i] - v.values[i - 1]) * inv_h;
    if (slope == 0.0) continue;
    const double donor = slope > 0.0 ? u.values[i - 1] : u.values[i];
    F.values[i] = model.psi(donor) * slope;
  }
  return F;
}

FaceFlux chemotactic_flux(const Field& u, const Field& v, const Grid& g, const ModelParams& p) {
  return chemotactic_flux(u, v, g, Nonlinearities(p));
}

Field laplacian(const Field& f, const Grid& g) {
  return div_cells(FaceFlux{grad_faces(f, g)}, g);
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw UsageError("solve_tridiagonal: inconsistent band lengths");
  std::vector<double> c(n), d(n), x(n);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / m : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

namespace {

// Bands of (scale * I + dt * (-lap)) on g.
void helmholtz_bands(const Grid& g, double dt, double scale, std::vector<double>& lower,
                     std::vector<double>& diag, std::vector<double>& upper) {
  const int nc = g.cells();
  auto area = g.face_area();
  auto vol = g.cell_volume();
  const double inv_h = 1.0 / g.h();
  lower.assign(nc, 0.0);
  upper.assign(nc, 0.0);
  diag.assign(nc, scale);
  for (int i = 0; i < nc; ++i) {
    // Boundary faces contribute nothing: Neumann.
    const double wl = i > 0 ? dt * area[i] * inv_h / vol[i] : 0.0;
    const double wr = i + 1 < nc ? dt * area[i + 1] * inv_h / vol[i] : 0.0;
    lower[i] = -wl;
    upper[i] = -wr;
    diag[i] += wl + wr;
  }
}

}  // namespace

Field solve_helmholtz(const Field& rhs, double dt, const Grid& g) {
  require_on_grid(rhs, g);
  std::vector<double> lower, diag, upper;
  helmholtz_bands(g, dt, 1.0 + dt, lower, diag, upper);
  return Field{solve_tridiagonal(lower, diag, upper, rhs.values), g.id()};
}

Field solve_steady_v(const Field& u, const Grid& g) {
  require_on_grid(u, g);
  std::vector<double> lower, diag, upper;
  helmholtz_bands(g, 1.0, 1.0, lower, diag, upper);
  return Field{solve_tridiagonal(lower, diag, upper, u.values), g.id()};
}

}  // namespace kslog

#pragma once

#include <vector>

#include "kslog/core.hpp"
#include "kslog/nonlin.hpp"

namespace kslog {

/// Per-face flux density, positive in the +x / +r direction. Fluxes built
/// by this module carry exact zeros on both boundary faces (homogeneous
/// Neumann condition; the r = 0 face also has zero area).
struct FaceFlux {
  std::vector<double> values;
};

/// (f_{i+1} - f_i)/h on interior faces, 0 on boundary faces.
std::vector<double> grad_faces(const Field& f, const Grid& g);

/// (A_{i+1/2} F_{i+1/2} - A_{i-1/2} F_{i-1/2}) / V_i.
Field div_cells(const FaceFlux& F, const Grid& g);

/// phi(mean(u_i, u_{i+1})) (u_{i+1} - u_i)/h, phi taken from `model`.
/// Throws DomainError for negative u.
FaceFlux diffusive_flux(const Field& u, const Grid& g, const Nonlinearities& model);
FaceFlux diffusive_flux(const Field& u, const Grid& g, const ModelParams& p);

/// Donor-cell flux psi(u_donor) dv/dr with the donor chosen upstream of
/// the drift direction +grad v.
FaceFlux chemotactic_flux(const Field& u, const Field& v, const Grid& g,
                          const Nonlinearities& model);
FaceFlux chemotactic_flux(const Field& u, const Field& v, const Grid& g, const ModelParams& p);

/// Discrete Neumann Laplacian div_cells(grad_faces(f)).
Field laplacian(const Field& f, const Grid& g);

/// Solves (I + dt (-lap + 1)) x = rhs with the discrete Neumann Laplacian.
Field solve_helmholtz(const Field& rhs, double dt, const Grid& g);

/// Solves (-lap + 1) v = u, the elliptic companion of the v equation.
Field solve_steady_v(const Field& u, const Grid& g);

/// Thomas algorithm for a tridiagonal system; `lower[0]` and `upper[n-1]`
/// are ignored.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs);

}  // namespace kslog

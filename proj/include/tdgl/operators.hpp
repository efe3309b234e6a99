#pragma once

// Gauge-covariant lattice operators on the periodic strip.
//
// Conventions (nondimensional, lengths in coherence lengths):
//   A-gradient     (grad_A psi)_l = h^-1 (U_l psi_b - psi_a) on link l = a->b
//   link variable  U_l = exp(i A_l h / kappa)
//   supercurrent   J_l = -h^-1 Im(conj(psi_a) U_l psi_b)
//   gauge change   psi -> psi exp(-i chi/kappa), A -> A + grad chi
//
// Open boundary rows (j = 0, ny-1) carry half a cell. The order-parameter
// closure eliminates the exterior neighbour through n . grad_A psi = 0, which
// doubles the y-coupling on those rows. Twisted and plain Laplacians are
// self-adjoint in the trapezoid inner product h^2 sum_v w_v conj(a_v) b_v.

#include "tdgl/grid.hpp"

#include <utility>

namespace tdgl {

struct LinkVariables {
  Field2D<cplx> ux;  // nx x ny
  Field2D<cplx> uy;  // nx x (ny-1)
  double kappa = 1.0;

  const GridSpec& grid() const { return ux.grid(); }
};

LinkVariables links_from_potential(const RealVectorField& a, double kappa);

// Unit links (A = 0).
LinkVariables unit_links(const GridSpec& grid, double kappa);

template <typename T>
VectorField<T> grad_scalar(const Field2D<T>& f);

ComplexVectorField a_gradient(const ScalarField& psi, const LinkVariables& u);

ScalarField twisted_laplacian(const ScalarField& psi, const LinkVariables& u);

// Writes twisted_laplacian(psi) into out without allocating. out must be a
// vertex field on the same grid.
void twisted_laplacian_into(const ScalarField& psi, const LinkVariables& u, ScalarField& out);

template <typename T>
Field2D<T> laplacian_scalar(const Field2D<T>& f);

// Componentwise 5-point Laplacian of the vector potential with the strip
// boundary conditions d_y A_x = -hz (so that curl A -> +hz at the walls) and
// A_y = 0 on the exterior half-links.
RealVectorField laplacian_vector(const RealVectorField& a, double hz);

CellField curl_z(const RealVectorField& a);

// Transpose of curl_z with respect to unweighted link/cell sums.
RealVectorField curl_adjoint(const CellField& b);

RealScalarField divergence(const RealVectorField& a);

RealVectorField supercurrent(const ScalarField& psi, const LinkVariables& u);

std::pair<ScalarField, RealVectorField> gauge_transform(const ScalarField& psi,
                                                        const RealVectorField& a,
                                                        const RealScalarField& chi,
                                                        double kappa);

// Trapezoid inner product h^2 sum_v w_v conj(a_v) b_v on vertex fields.
cplx weighted_inner(const ScalarField& a, const ScalarField& b);

}  // namespace tdgl

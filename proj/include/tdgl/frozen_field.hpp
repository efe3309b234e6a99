#pragma once

// Frozen-field reduced model: the vector potential is held at the stationary
// applied-field solution A_inf (curl curl A = curl H, div A = 0) and only psi
// evolves,
//
//   d_t psi = Lap_{A_inf} psi + (1 - |psi|^2) psi,   n . grad_{A_inf} psi = 0.

#include "tdgl/grid.hpp"
#include "tdgl/integrator.hpp"
#include "tdgl/linear_solvers.hpp"
#include "tdgl/operators.hpp"

namespace tdgl {

struct FrozenModel {
  RealVectorField a_inf;
  LinkVariables u_inf;
  CellField b_inf;
  double kappa = 1.0;
  double hz = 0.0;
  double residual = 0.0;  // ||Lap A_inf|| with the wall datum folded in
};

// A_y = 0, A_x = -hz (y_j - y_c). curl_z is hz in every cell and the
// divergence vanishes identically.
RealVectorField uniform_field_potential(double hz, const GridSpec& grid);

FrozenModel make_frozen_model(RealVectorField a_inf, double kappa, double hz);

// Stationarity residual of a candidate A_inf: l2 norm of laplacian_vector(a, hz).
double a_infinity_residual(const RealVectorField& a, double hz);

struct AInfinityOptions {
  double sigma = 1.0;
  double dt = 50.0;
  double tol = 1e-10;
  long max_steps = 100000;
  bool analytic = false;  // return the closed form instead of marching
};

// Marches step_vector_potential with J_s = 0 from A = 0 until the residual
// falls to opts.tol. Throws NonConvergence otherwise, or if the divergence
// of the result exceeds the tolerance.
FrozenModel solve_A_infinity(double hz, const GridSpec& grid, double kappa,
                             const AInfinityOptions& opts = {});

// Local step with phi = 0, then backward-Euler diffusion with the frozen links.
ScalarField frozen_step(const ScalarField& psi, const FrozenModel& model, double dt,
                        const CGOptions& cg);

struct FrozenRun {
  ScalarField psi;
  long steps = 0;
  bool converged = false;
  double last_change = 0.0;
};

// Iterates frozen_step under cfg's equilibration rule (change of psi only;
// B is constant in this model).
FrozenRun run_frozen(const ScalarField& psi0, const FrozenModel& model, const SimConfig& cfg);

// Exactly n frozen steps.
ScalarField evolve_frozen(ScalarField psi, const FrozenModel& model, double dt,
                          const CGOptions& cg, long n);

}  // namespace tdgl

#pragma once

// Split-step integrator for the nondimensional TDGL system
//
//   (d_t - (i/kappa) phi) psi = Lap_A psi + (1 - |psi|^2) psi
//   sigma d_t A              = Lap A + J_s / kappa
//   sigma phi + div A        = 0
//
// on the periodic strip with n . grad_A psi = 0, curl A = hz and A_y = 0 on
// the open walls. One step is: phi from the gauge, explicit local update,
// backward-Euler diffusion of psi (CG), supercurrent from the new psi, and a
// backward-Euler solve for A (FFT in x, Thomas in y).

#include "tdgl/grid.hpp"
#include "tdgl/linear_solvers.hpp"
#include "tdgl/operators.hpp"

#include <cstdint>
#include <functional>

namespace tdgl {

struct SimConfig {
  GridSpec grid;
  double kappa = 1.0;
  double sigma = 1.0;
  double hz = 0.0;  // applied field in units of sqrt(2) H_c
  double dt = 0.4;
  CGOptions cg;
  std::uint64_t seed = 0;
  int equil_steps = 20000;
  double equil_tol = 1e-7;
  double noise_amplitude = 1e-2;

  void set_hz_ratio(double ratio) { hz = ratio * kappa; }
  double hz_ratio() const { return hz / kappa; }
  void validate() const;
};

struct SimState {
  ScalarField psi;
  RealVectorField a;
  RealScalarField phi;  // cached -div(a)/sigma
  double t = 0.0;
  long step = 0;
};

// psi = 1 + seeded complex noise, A = uniform applied-field potential.
SimState initial_state(const SimConfig& cfg);

SimState make_state(ScalarField psi, RealVectorField a, double sigma, double t = 0.0, long step = 0);

RealScalarField phi_from_gauge(const RealVectorField& a, double sigma);

// psi <- exp((i/kappa) phi dt) (psi + dt (1 - |psi|^2) psi), pointwise.
ScalarField local_step(const ScalarField& psi, const RealScalarField& phi, double dt, double kappa);
void local_step_inplace(ScalarField& psi, const RealScalarField* phi, double dt, double kappa);

// Solves (I - dt Lap_A) psi' = psi with CG (Hermitian in the trapezoid
// inner product, so the system is premultiplied by the row weights).
ScalarField diffusion_step_psi(const ScalarField& psi, const LinkVariables& u, double dt,
                               const CGOptions& cg, int* iterations = nullptr);

// Solves (sigma - dt Lap) a' = sigma a + dt js / kappa with the wall
// conditions folded into Lap.
RealVectorField step_vector_potential(const RealVectorField& a, const RealVectorField& js, double hz,
                                      double sigma, double dt, double kappa);

struct StepReport {
  int cg_iterations = 0;
};

StepReport full_step(SimState& state, const SimConfig& cfg);

struct EquilibriumReport {
  long steps = 0;
  bool converged = false;  // true: change fell below equil_tol; false: step cap reached
  double last_change = 0.0;
};

using StepObserver = std::function<void(const SimState&)>;

// Per-step change measure used by the equilibration loops: ||dpsi|| relative
// to the norm of the uniform state psi = 1, and ||dB|| relative to
// max(||B||, ||1||). Returns the larger of the two.
double psi_change(const ScalarField& before, const ScalarField& after);
double field_change(const CellField& before, const CellField& after);

// Steps until the change measure drops below cfg.equil_tol or
// cfg.equil_steps steps were taken. `observer` runs after every step.
EquilibriumReport run_to_equilibrium(SimState& state, const SimConfig& cfg,
                                     const StepObserver& observer = {});

// Lap_A psi + (1 - |psi|^2) psi, the gradient of the free energy in the
// trapezoid metric.
ScalarField psi_rhs(const ScalarField& psi, const LinkVariables& u);

double free_energy(const SimState& state, const SimConfig& cfg);
double free_energy(const ScalarField& psi, const RealVectorField& a, double kappa, double hz);

}  // namespace tdgl

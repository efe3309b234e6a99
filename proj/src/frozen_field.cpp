#include "tdgl/frozen_field.hpp"

#include <cmath>

namespace tdgl {

RealVectorField uniform_field_potential(double hz, const GridSpec& grid) {
  RealVectorField a(grid);
  const double yc = grid.y_center();
  for (int j = 0; j < grid.ny; ++j) {
    const double v = -hz * (grid.y(j) - yc);
    for (int i = 0; i < grid.nx; ++i) a.x(i, j) = v;
  }
  return a;
}

double a_infinity_residual(const RealVectorField& a, double hz) {
  return l2_norm(laplacian_vector(a, hz));
}

FrozenModel make_frozen_model(RealVectorField a_inf, double kappa, double hz) {
  FrozenModel m;
  m.u_inf = links_from_potential(a_inf, kappa);
  m.b_inf = curl_z(a_inf);
  m.residual = a_infinity_residual(a_inf, hz);
  m.a_inf = std::move(a_inf);
  m.kappa = kappa;
  m.hz = hz;
  return m;
}

FrozenModel solve_A_infinity(double hz, const GridSpec& grid, double kappa,
                             const AInfinityOptions& opts) {
  if (opts.analytic) return make_frozen_model(uniform_field_potential(hz, grid), kappa, hz);

  const double scale = std::max(std::abs(hz), 1.0);
  const RealVectorField zero(grid);
  RealVectorField a(grid);
  double res = a_infinity_residual(a, hz);
  long n = 0;
  while (res > opts.tol * scale) {
    if (n == opts.max_steps) {
      throw NonConvergence("solve_A_infinity: residual did not reach tolerance",
                           static_cast<int>(n), res / scale);
    }
    a = step_vector_potential(a, zero, hz, opts.sigma, opts.dt, kappa);
    res = a_infinity_residual(a, hz);
    ++n;
  }
  const double div = l2_norm(divergence(a));
  if (div > opts.tol * scale) {
    throw NonConvergence("solve_A_infinity: divergence constraint violated", static_cast<int>(n),
                         div / scale);
  }
  return make_frozen_model(std::move(a), kappa, hz);
}

ScalarField frozen_step(const ScalarField& psi, const FrozenModel& model, double dt,
                        const CGOptions& cg) {
  ScalarField next = psi;
  local_step_inplace(next, nullptr, dt, model.kappa);
  return diffusion_step_psi(next, model.u_inf, dt, cg);
}

FrozenRun run_frozen(const ScalarField& psi0, const FrozenModel& model, const SimConfig& cfg) {
  cfg.validate();
  FrozenRun run;
  run.psi = psi0;
  for (long n = 0; n < cfg.equil_steps; ++n) {
    ScalarField next = frozen_step(run.psi, model, cfg.dt, cfg.cg);
    run.last_change = psi_change(run.psi, next);
    run.psi = std::move(next);
    ++run.steps;
    if (!all_finite(run.psi)) {
      throw NonConvergence("run_frozen: state became non-finite", static_cast<int>(n + 1),
                           run.last_change);
    }
    if (run.last_change < cfg.equil_tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

ScalarField evolve_frozen(ScalarField psi, const FrozenModel& model, double dt,
                          const CGOptions& cg, long n) {
  for (long k = 0; k < n; ++k) psi = frozen_step(psi, model, dt, cg);
  return psi;
}

}  // namespace tdgl

#include "tdgl/integrator.hpp"

#include "tdgl/frozen_field.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tdgl {

void SimConfig::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("SimConfig: kappa must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("SimConfig: sigma must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
  if (!std::isfinite(hz)) throw std::invalid_argument("SimConfig: hz must be finite");
  if (equil_steps < 0) throw std::invalid_argument("SimConfig: equil_steps must be >= 0");
  if (!(equil_tol > 0.0)) throw std::invalid_argument("SimConfig: equil_tol must be positive");
  cg.validate();
}

SimState make_state(ScalarField psi, RealVectorField a, double sigma, double t, long step) {
  SimState s;
  s.phi = phi_from_gauge(a, sigma);
  s.psi = std::move(psi);
  s.a = std::move(a);
  s.t = t;
  s.step = step;
  return s;
}

SimState initial_state(const SimConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  ScalarField psi(cfg.grid, Location::vertex);
  for (auto& v : psi.values()) {
    const double re = noise(rng);
    const double im = noise(rng);
    v = cplx(1.0 + cfg.noise_amplitude * re, cfg.noise_amplitude * im);
  }
  return make_state(std::move(psi), uniform_field_potential(cfg.hz, cfg.grid), cfg.sigma);
}

RealScalarField phi_from_gauge(const RealVectorField& a, double sigma) {
  RealScalarField phi = divergence(a);
  const double s = -1.0 / sigma;
  for (auto& v : phi.values()) v *= s;
  return phi;
}

void local_step_inplace(ScalarField& psi, const RealScalarField* phi, double dt, double kappa) {
  auto p = psi.values();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const cplx v = p[k];
    cplx next = v + dt * (1.0 - std::norm(v)) * v;
    if (phi) next *= std::polar(1.0, (*phi)[k] * dt / kappa);
    p[k] = next;
  }
}

ScalarField local_step(const ScalarField& psi, const RealScalarField& phi, double dt, double kappa) {
  ScalarField out = psi;
  local_step_inplace(out, &phi, dt, kappa);
  return out;
}

ScalarField diffusion_step_psi(const ScalarField& psi, const LinkVariables& u, double dt,
                               const CGOptions& cg, int* iterations) {
  const GridSpec& g = psi.grid();
  const int nx = g.nx;
  const int ny = g.ny;
  if (dt == 0.0) {
    if (iterations) *iterations = 0;
    return psi;
  }
  ScalarField lap(g, Location::vertex);
  // W (I - dt Lap_A) with W = diag(row weights) is Hermitian positive definite.
  auto apply = [&](const ScalarField& in, ScalarField& out) {
    twisted_laplacian_into(in, u, lap);
    const cplx* iv = in.values().data();
    const cplx* lv = lap.values().data();
    cplx* ov = out.values().data();
    for (int j = 0; j < ny; ++j) {
      const double w = boundary_row_weight(g, j);
      const std::size_t r = static_cast<std::size_t>(j) * nx;
      for (int i = 0; i < nx; ++i) ov[r + i] = w * (iv[r + i] - dt * lv[r + i]);
    }
  };
  ScalarField rhs = psi;
  for (int i = 0; i < nx; ++i) {
    rhs(i, 0) *= 0.5;
    rhs(i, ny - 1) *= 0.5;
  }
  CGResult res = cg_solve(apply, rhs, cg, &psi);
  if (iterations) *iterations = res.iterations;
  return std::move(res.x);
}

namespace {

// Backward-Euler solve of one component: rows of `rhs` are transformed in x,
// each mode k gets a real tridiagonal system in y.
// `neumann` selects the A_x closure (doubled boundary coupling) versus the
// zero exterior link used for A_y.
Field2D<double> solve_component(const Field2D<double>& rhs, double sigma, double dt, bool neumann) {
  const GridSpec& g = rhs.grid();
  const int nx = g.nx;
  const int m = rhs.rows();
  const double c = dt / (g.h * g.h);
  ModeSet modes = fft_x_forward(rhs);

  std::vector<double> lower(m, -c), diag(m), upper(m, -c), scratch(m);
  lower[0] = 0.0;
  upper[m - 1] = 0.0;
  if (neumann) {
    upper[0] = -2.0 * c;
    lower[m - 1] = -2.0 * c;
  }
  std::vector<cplx> col(m);
  for (int k = 0; k < modes.modes_per_row(); ++k) {
    const double s = std::sin(std::numbers::pi * k / nx);
    const double shift = sigma + 4.0 * c * s * s + 2.0 * c;
    std::fill(diag.begin(), diag.end(), shift);
    for (int j = 0; j < m; ++j) col[j] = modes.at(k, j);
    thomas_solve_inplace(lower, diag, upper, col, scratch);
    for (int j = 0; j < m; ++j) modes.at(k, j) = col[j];
  }
  return fft_x_inverse(modes, rhs);
}

}  // namespace

RealVectorField step_vector_potential(const RealVectorField& a, const RealVectorField& js, double hz,
                                      double sigma, double dt, double kappa) {
  if (!a.same_shape(js)) throw ShapeMismatch("step_vector_potential: a and js differ in shape");
  if (dt == 0.0) return a;
  const GridSpec& g = a.grid();
  const double jscale = dt / kappa;

  Field2D<double> rx = a.x;
  for (std::size_t k = 0; k < rx.size(); ++k) rx[k] = sigma * a.x[k] + jscale * js.x[k];
  const double wall = dt * 2.0 * hz / g.h;
  for (int i = 0; i < g.nx; ++i) {
    rx(i, 0) += wall;
    rx(i, g.ny - 1) -= wall;
  }
  Field2D<double> ry = a.y;
  for (std::size_t k = 0; k < ry.size(); ++k) ry[k] = sigma * a.y[k] + jscale * js.y[k];

  RealVectorField out;
  out.x = solve_component(rx, sigma, dt, true);
  out.y = solve_component(ry, sigma, dt, false);
  return out;
}

StepReport full_step(SimState& state, const SimConfig& cfg) {
  StepReport rep;
  state.phi = phi_from_gauge(state.a, cfg.sigma);
  local_step_inplace(state.psi, &state.phi, cfg.dt, cfg.kappa);
  const LinkVariables u = links_from_potential(state.a, cfg.kappa);
  state.psi = diffusion_step_psi(state.psi, u, cfg.dt, cfg.cg, &rep.cg_iterations);
  const RealVectorField js = supercurrent(state.psi, u);
  state.a = step_vector_potential(state.a, js, cfg.hz, cfg.sigma, cfg.dt, cfg.kappa);
  state.phi = phi_from_gauge(state.a, cfg.sigma);
  state.t += cfg.dt;
  ++state.step;
  return rep;
}

double psi_change(const ScalarField& before, const ScalarField& after) {
  const GridSpec& g = before.grid();
  const double unit = std::sqrt(g.h * g.h * static_cast<double>(before.size()));
  return l2_norm(subtract(after, before)) / unit;
}

double field_change(const CellField& before, const CellField& after) {
  const GridSpec& g = before.grid();
  const double unit = std::sqrt(g.h * g.h * static_cast<double>(before.size()));
  return l2_norm(subtract(after, before)) / std::max(l2_norm(before), unit);
}

EquilibriumReport run_to_equilibrium(SimState& state, const SimConfig& cfg,
                                     const StepObserver& observer) {
  cfg.validate();
  EquilibriumReport rep;
  CellField b_prev = curl_z(state.a);
  for (long n = 0; n < cfg.equil_steps; ++n) {
    const ScalarField psi_prev = state.psi;
    full_step(state, cfg);
    ++rep.steps;
    CellField b = curl_z(state.a);
    rep.last_change = std::max(psi_change(psi_prev, state.psi), field_change(b_prev, b));
    b_prev = std::move(b);
    if (observer) observer(state);
    if (!all_finite(state.psi) || !all_finite(state.a)) {
      throw NonConvergence("run_to_equilibrium: state became non-finite", static_cast<int>(n + 1),
                           rep.last_change);
    }
    if (rep.last_change < cfg.equil_tol) {
      rep.converged = true;
      break;
    }
  }
  return rep;
}

ScalarField psi_rhs(const ScalarField& psi, const LinkVariables& u) {
  ScalarField out = twisted_laplacian(psi, u);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] += (1.0 - std::norm(psi[k])) * psi[k];
  }
  return out;
}

double free_energy(const ScalarField& psi, const RealVectorField& a, double kappa, double hz) {
  const GridSpec& g = psi.grid();
  const LinkVariables u = links_from_potential(a, kappa);
  double potential = 0.0;
  double kinetic = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double w = boundary_row_weight(g, j);
    double row_pot = 0.0;
    double row_kin = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const double rho = std::norm(psi(i, j));
      row_pot += -rho + 0.5 * rho * rho;
      row_kin += std::norm(u.ux(i, j) * psi(i + 1, j) - psi(i, j));
    }
    potential += w * row_pot;
    kinetic += w * row_kin;
  }
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) kinetic += std::norm(u.uy(i, j) * psi(i, j + 1) - psi(i, j));
  }
  double field = 0.0;
  const CellField b = curl_z(a);
  for (const double v : b.values()) field += (v - hz) * (v - hz);
  // Link terms carry h^2 |grad_A psi|^2 = |U psi_b - psi_a|^2.
  return g.h * g.h * (potential + field) + kinetic;
}

double free_energy(const SimState& state, const SimConfig& cfg) {
  return free_energy(state.psi, state.a, cfg.kappa, cfg.hz);
}

}  // namespace tdgl

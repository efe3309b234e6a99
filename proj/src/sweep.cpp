#include "tdgl/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tdgl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void say(const SweepPlan& plan, const std::string& msg) {
  if (plan.log) plan.log(msg);
}

Field2D<double> scaled(const Field2D<double>& f, double kappa) { return scale(1.0 / kappa, f); }

double scaled_delta_bz(const CellField& b, double kappa, const CellField& b_ref, double kappa_ref,
                       double hz_ratio) {
  if (hz_ratio == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return delta_bz(scaled(b, kappa), scaled(b_ref, kappa_ref), hz_ratio);
}

}  // namespace

void SweepPlan::validate() const {
  if (kappas.empty()) throw std::invalid_argument("SweepPlan: kappa list is empty");
  for (const double k : kappas) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("SweepPlan: kappa must be positive");
  }
  if (!std::is_sorted(kappas.begin(), kappas.end())) {
    throw std::invalid_argument("SweepPlan: kappas must be ascending");
  }
  if (kappa_ref != kappas.back()) throw std::invalid_argument("SweepPlan: kappa_ref must equal max(kappas)");
  if (!(hz_ratio >= 0.0 && hz_ratio < 1.0)) {
    throw std::invalid_argument("SweepPlan: hz_ratio must lie in [0, 1)");
  }
  if (reference_steps < 0 || reference_steps > 2147483647L) {
    throw std::invalid_argument("SweepPlan: reference_steps out of range");
  }
  if (reference && !(reference->psi.grid() == base.grid)) {
    throw ShapeMismatch("SweepPlan: reference state does not match the grid");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("SweepPlan: horizon must be positive");
  if (initial_psi && (initial_psi->location() != Location::vertex || !(initial_psi->grid() == base.grid))) {
    throw ShapeMismatch("SweepPlan: initial_psi does not match the grid");
  }
  base.validate();
}

SimConfig SweepPlan::config_for(double kappa) const {
  SimConfig cfg = base;
  cfg.kappa = kappa;
  cfg.set_hz_ratio(hz_ratio);
  return cfg;
}

LogLogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_loglog_slope: need at least 3 points");
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [k, v] : points) {
    if (!(k > 0.0) || !(v > 0.0)) throw std::invalid_argument("fit_loglog_slope: nonpositive value");
    sx += std::log(k);
    sy += std::log(v);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [k, v] : points) {
    const double dx = std::log(k) - mx;
    const double dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: all kappa values coincide");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

void fit_records(SweepResult& result) {
  std::vector<std::pair<double, double>> psi_pts, bz_pts;
  for (const auto& r : result.records) {
    if (r.failed) continue;
    if (r.delta_psi > 0.0 && std::isfinite(r.delta_psi)) psi_pts.emplace_back(r.kappa, r.delta_psi);
    if (r.delta_bz > 0.0 && std::isfinite(r.delta_bz)) bz_pts.emplace_back(r.kappa, r.delta_bz);
  }
  result.fit_psi.reset();
  result.fit_bz.reset();
  if (psi_pts.size() >= 3) result.fit_psi = fit_loglog_slope(psi_pts);
  if (bz_pts.size() >= 3) result.fit_bz = fit_loglog_slope(bz_pts);
  result.conclusive = psi_pts.size() >= min_fit_points && bz_pts.size() >= min_fit_points;
}

SweepResult run_sweep(const SweepPlan& plan) {
  plan.validate();
  SweepResult result;

  SimConfig ref_cfg = plan.config_for(plan.kappa_ref);
  if (plan.reference_steps > 0) ref_cfg.equil_steps = static_cast<int>(plan.reference_steps);
  if (plan.reference_tol > 0.0) ref_cfg.equil_tol = plan.reference_tol;
  auto t0 = Clock::now();
  SimState ref;
  if (plan.reference) {
    ref = *plan.reference;
    say(plan, "reference supplied by the plan");
  } else {
    ref = initial_state(ref_cfg);
    const EquilibriumReport ref_rep = run_to_equilibrium(ref, ref_cfg);
    result.reference_steps = ref_rep.steps;
    std::ostringstream os;
    os << "reference kappa=" << plan.kappa_ref << " steps=" << ref_rep.steps
       << " converged=" << ref_rep.converged << " change=" << ref_rep.last_change;
    say(plan, os.str());
  }
  result.reference_runtime_s = seconds_since(t0);
  const CellField b_ref = curl_z(ref.a);
  const Field2D<double> ax_ref = scaled(ref.a.x, plan.kappa_ref);

  bool skipped_ref = false;
  for (const double kappa : plan.kappas) {
    if (kappa == plan.kappa_ref && !skipped_ref) {
      skipped_ref = true;
      continue;
    }
    ComparisonRecord rec;
    rec.kappa = kappa;
    t0 = Clock::now();
    try {
      const SimConfig cfg = plan.config_for(kappa);
      SimState s = plan.warm_start
                       ? make_state(ref.psi, scale(kappa / plan.kappa_ref, ref.a), cfg.sigma)
                       : initial_state(cfg);
      const EquilibriumReport rep = run_to_equilibrium(s, cfg);
      rec.steps = rep.steps;
      rec.converged = rep.converged;
      const CellField b = curl_z(s.a);
      rec.delta_psi = delta_psi(s.psi, ref.psi);
      rec.delta_bz = scaled_delta_bz(b, kappa, b_ref, plan.kappa_ref, plan.hz_ratio);
      rec.vortex_count = vortex_count(s.psi, links_from_potential(s.a, kappa)).count;
      rec.profile = x_avg_profile(scaled(s.a.x, kappa), ax_ref);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    rec.runtime_s = seconds_since(t0);
    {
      std::ostringstream os;
      os << "kappa=" << kappa << " steps=" << rec.steps << " delta_psi=" << rec.delta_psi
         << " delta_bz=" << rec.delta_bz << " vortices=" << rec.vortex_count
         << (rec.failed ? " FAILED: " + rec.error : std::string());
      say(plan, os.str());
    }
    result.records.push_back(std::move(rec));
  }
  fit_records(result);
  result.reference = std::move(ref);
  return result;
}

SweepResult compare_frozen(const SweepPlan& plan) {
  plan.validate();
  SweepResult result;
  const long n_steps = std::lround(plan.horizon / plan.base.dt);

  // Initial data shared by every rung: in scaled units the frozen model does
  // not depend on kappa, so its equilibrium is computed once.
  ScalarField psi0;
  auto t0 = Clock::now();
  if (plan.initial_psi) {
    psi0 = *plan.initial_psi;
  } else {
    const SimConfig cfg = plan.config_for(plan.kappa_ref);
    const FrozenModel model = solve_A_infinity(cfg.hz, cfg.grid, cfg.kappa, {.analytic = true});
    const FrozenRun run = run_frozen(initial_state(cfg).psi, model, cfg);
    psi0 = run.psi;
    result.reference_steps = run.steps;
    std::ostringstream os;
    os << "frozen equilibrium steps=" << run.steps << " converged=" << run.converged
       << " change=" << run.last_change;
    say(plan, os.str());
  }
  result.reference_runtime_s = seconds_since(t0);

  for (const double kappa : plan.kappas) {
    ComparisonRecord rec;
    rec.kappa = kappa;
    t0 = Clock::now();
    try {
      const SimConfig cfg = plan.config_for(kappa);
      const FrozenModel model = solve_A_infinity(cfg.hz, cfg.grid, kappa, {.sigma = cfg.sigma});
      const ScalarField psi_inf = evolve_frozen(psi0, model, cfg.dt, cfg.cg, n_steps);
      SimState s = make_state(psi0, model.a_inf, cfg.sigma);
      for (long n = 0; n < n_steps; ++n) full_step(s, cfg);
      rec.steps = n_steps;
      rec.converged = true;
      rec.delta_psi = delta_psi(s.psi, psi_inf);
      rec.delta_bz = cfg.hz == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                   : delta_bz(curl_z(s.a), model.b_inf, cfg.hz);
      rec.vortex_count = vortex_count(s.psi, links_from_potential(s.a, kappa)).count;
      rec.profile = x_avg_profile(scaled(s.a.x, kappa), scaled(model.a_inf.x, kappa));

      if (plan.compare_equilibria) {
        ComparisonRecord eq;
        eq.kappa = kappa;
        SimState full = make_state(psi0, model.a_inf, cfg.sigma);
        const EquilibriumReport rep = run_to_equilibrium(full, cfg);
        const FrozenRun frun = run_frozen(psi0, model, cfg);
        eq.steps = rep.steps;
        eq.converged = rep.converged && frun.converged;
        eq.delta_psi = delta_psi(full.psi, frun.psi);
        eq.delta_bz = cfg.hz == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                    : delta_bz(curl_z(full.a), model.b_inf, cfg.hz);
        eq.vortex_count = vortex_count(full.psi, links_from_potential(full.a, kappa)).count;
        eq.profile = x_avg_profile(scaled(full.a.x, kappa), scaled(model.a_inf.x, kappa));
        result.equilibrium_records.push_back(std::move(eq));
      }
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    rec.runtime_s = seconds_since(t0);
    {
      std::ostringstream os;
      os << "kappa=" << kappa << " delta_psi=" << rec.delta_psi << " delta_bz=" << rec.delta_bz
         << (rec.failed ? " FAILED: " + rec.error : std::string());
      say(plan, os.str());
    }
    result.records.push_back(std::move(rec));
  }
  fit_records(result);
  return result;
}

}  // namespace tdgl

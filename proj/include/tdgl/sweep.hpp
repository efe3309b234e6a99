#pragma once

// kappa-ladder experiments: equilibria at several kappa compared against a
// reference kappa, and full TDGL compared against the frozen-field model on
// a fixed horizon. Comparisons use scaled variables (A/kappa, B/kappa), in
// which the applied field hz_ratio is the same for every rung.

#include "tdgl/frozen_field.hpp"
#include "tdgl/integrator.hpp"
#include "tdgl/observables.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tdgl {

struct SweepPlan {
  std::vector<double> kappas;  // ascending
  double kappa_ref = 0.0;      // max(kappas)
  double hz_ratio = 0.088;
  SimConfig base;              // grid, dt, sigma, cg, seed, equilibration limits
  long reference_steps = 0;    // step cap for the reference run; 0 uses base.equil_steps
  double reference_tol = 0.0;  // change tolerance for the reference run; 0 uses base.equil_tol
  std::optional<SimState> reference;  // precomputed reference equilibrium, skips that run
  bool warm_start = true;
  double horizon = 200.0;      // compare_frozen only
  bool compare_equilibria = false;
  std::optional<ScalarField> initial_psi;  // compare_frozen only
  std::function<void(const std::string&)> log;

  void validate() const;
  SimConfig config_for(double kappa) const;
};

struct ComparisonRecord {
  double kappa = 0.0;
  double delta_psi = 0.0;
  double delta_bz = 0.0;
  int vortex_count = 0;
  std::vector<double> profile;  // <A_x,k/k - A_x,ref/k_ref>_x per y-row
  long steps = 0;
  bool converged = false;
  double runtime_s = 0.0;
  bool failed = false;
  std::string error;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares of ln(value) on ln(kappa). Needs at least three
// points; throws std::invalid_argument for a nonpositive kappa or value.
LogLogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

inline constexpr int min_fit_points = 4;

struct SweepResult {
  std::vector<ComparisonRecord> records;
  std::optional<LogLogFit> fit_psi;
  std::optional<LogLogFit> fit_bz;
  bool conclusive = false;
  double reference_runtime_s = 0.0;
  long reference_steps = 0;
  std::optional<SimState> reference;
  std::vector<ComparisonRecord> equilibrium_records;  // compare_frozen with compare_equilibria
};

// Fits surviving records with positive metrics; sets conclusive when both
// fits have at least min_fit_points points.
void fit_records(SweepResult& result);

SweepResult run_sweep(const SweepPlan& plan);

SweepResult compare_frozen(const SweepPlan& plan);

}  // namespace tdgl

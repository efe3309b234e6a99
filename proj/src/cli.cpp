#include "tdgl/cli.hpp"

#include "tdgl/io.hpp"
#include "tdgl/observables.hpp"
#include "tdgl/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

namespace tdgl {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string run_row(const SimState& s, const SimConfig& cfg) {
  const int vc = vortex_count(s.psi, links_from_potential(s.a, cfg.kappa)).count;
  return num(s.t) + "," + num(free_energy(s, cfg)) + "," + std::to_string(vc) + "\n";
}

int cmd_run(const std::string& config, long steps_override, const std::string& resume) {
  RunConfig rc = load_config(config);
  if (steps_override >= 0) rc.sim.equil_steps = static_cast<int>(steps_override);
  SimConfig& cfg = rc.sim;
  cfg.validate();
  const fs::path out(rc.out_dir);
  ensure_dir(out);

  SimState state = resume.empty() ? initial_state(cfg) : decode_checkpoint(read_file(resume), cfg.sigma, cfg.dt);
  if (!(state.psi.grid() == cfg.grid)) throw ConfigError("checkpoint grid does not match the config", 0);
  const long total = cfg.equil_steps;
  SimConfig stepping = cfg;
  stepping.equil_steps = static_cast<int>(std::max<long>(0, total - state.step));

  const long every = rc.checkpoint_every > 0 ? rc.checkpoint_every : 100;
  std::string csv = "t,free_energy,vortex_count\n" + run_row(state, cfg);
  auto observer = [&](const SimState& s) {
    if (s.step % every != 0) return;
    csv += run_row(s, cfg);
    if (rc.checkpoint_every > 0) write_file_atomic(out / "checkpoint.tdgl", encode_checkpoint(s, cfg.kappa));
  };
  const EquilibriumReport rep = run_to_equilibrium(state, stepping, observer);
  if (state.step % every != 0) csv += run_row(state, cfg);

  write_file_atomic(out / "psi.tdgl", write_dump(state.psi, cfg.kappa, state.t));
  write_file_atomic(out / "a.tdgl", write_dump(state.a, cfg.kappa, state.t));
  write_file_atomic(out / "bz.tdgl", write_dump(curl_z(state.a), cfg.kappa, state.t));
  write_file_atomic(out / "run.csv", csv);
  std::cerr << "run: " << rep.steps << " steps, " << (rep.converged ? "converged" : "step cap reached")
            << ", last change " << rep.last_change << "\n";
  return exit_ok;
}

int cmd_sweep(const std::string& config, bool frozen) {
  const RunConfig rc = load_config(config);
  SweepPlan plan = plan_from_config(rc);
  plan.log = [](const std::string& m) { std::cerr << m << "\n"; };
  const fs::path out(rc.out_dir);
  ensure_dir(out);
  const SweepResult res = frozen ? compare_frozen(plan) : run_sweep(plan);
  const std::string stem = frozen ? "compare" : "sweep";
  write_file_atomic(out / (stem + "_records.csv"), records_csv(res.records));
  write_file_atomic(out / (stem + "_fit.csv"), fit_csv(res));
  if (!res.conclusive) std::cerr << stem << ": fewer than " << min_fit_points << " usable points, fit inconclusive\n";
  return exit_ok;
}

int cmd_render(const std::string& in, const std::string& out) {
  const Dump d = read_dump(read_file(in));
  Field2D<double> img;
  if (const auto* psi = std::get_if<ScalarField>(&d.field)) {
    img = density(*psi);
  } else if (const auto* a = std::get_if<RealVectorField>(&d.field)) {
    img = a->x;
  } else {
    img = std::get<CellField>(d.field);
  }
  render_pgm(img, out);
  return exit_ok;
}

}  // namespace

int run_main(int argc, char** argv) {
  CLI::App app{"TDGL vortex simulator on a periodic strip"};
  app.require_subcommand(1);

  std::string config, resume, in, out;
  long steps = -1;

  auto* run = app.add_subcommand("run", "equilibrate and write psi, A, B_z dumps and a run CSV");
  run->add_option("--config", config, "config file")->required();
  run->add_option("--steps", steps, "step cap (overrides the config)")->check(CLI::NonNegativeNumber);
  run->add_option("--resume", resume, "checkpoint to resume from");

  auto* sweep = app.add_subcommand("sweep", "kappa ladder of equilibria against the largest kappa");
  sweep->add_option("--config", config, "config file")->required();

  auto* compare = app.add_subcommand("compare", "full TDGL against the frozen-field model");
  compare->add_option("--config", config, "config file")->required();

  auto* render = app.add_subcommand("render", "render a dump as an 8-bit PGM");
  render->add_option("--in", in, "dump file")->required();
  render->add_option("--out", out, "PGM output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (run->parsed()) return cmd_run(config, steps, resume);
    if (sweep->parsed()) return cmd_sweep(config, false);
    if (compare->parsed()) return cmd_sweep(config, true);
    if (render->parsed()) return cmd_render(in, out);
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (iterations " << e.iterations() << ", residual "
              << e.residual() << ")\n";
    return exit_nonconvergence;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const DumpError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace tdgl

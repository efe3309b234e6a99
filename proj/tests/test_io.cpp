#include "oracles.hpp"
#include "tdgl/cli.hpp"
#include "tdgl/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace tdgl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tdgl_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tdgl");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig c = parse_config("kappa = 200\nnx = 128\nny = 128\n");
  CHECK(c.sim.grid.nx == 128);
  CHECK(c.sim.grid.h == 0.5);
  CHECK(c.sim.dt == 0.4);
  CHECK(c.sim.hz == doctest::Approx(17.6));
  CHECK(c.sim.sigma == 1.0);
  CHECK(c.sim.cg.tol == 1e-8);
  CHECK(c.sim.equil_tol == 1e-7);
  CHECK(c.kappas.empty());
}

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(
      "# ladder\n"
      "nx = 64   # width\n"
      "ny=64\n"
      "kappas = 40,80, 160,320,640\n"
      "hz = 3.5\n"
      "steps = 1000\n"
      "seed = 7\n"
      "out_dir = results/a\n"
      "\n");
  CHECK(c.kappas.size() == 5);
  CHECK(c.sim.kappa == 640.0);
  CHECK(c.sim.hz == 3.5);
  CHECK(c.sim.equil_steps == 1000);
  CHECK(c.sim.seed == 7u);
  CHECK(c.out_dir == "results/a");
  const SweepPlan p = plan_from_config(c);
  CHECK(p.kappa_ref == 640.0);
  CHECK(p.kappas.size() == 5);
}

TEST_CASE("config errors name the line") {
  try {
    (void)parse_config("kappa = 2\nnx = 8\nny = 8\ndt = -1\n");
    FAIL("expected BadValue");
  } catch (const BadValue& e) {
    CHECK(e.line() == 4);
  }
  try {
    (void)parse_config("kappa = 2\ncolour = red\n");
    FAIL("expected UnknownKey");
  } catch (const UnknownKey& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_config("nx = 8\nny = 8\n"), MissingRequired);
  CHECK_THROWS_AS(parse_config("kappa = 1\nny = 8\n"), MissingRequired);
  CHECK_THROWS_AS(parse_config("kappa = 1\nnx = 8\nny = 8\nnx = 16\n"), BadValue);
  CHECK_THROWS_AS(parse_config("kappa = x\nnx = 8\nny = 8\n"), BadValue);
  CHECK_THROWS_AS(parse_config("kappa = 1\nnx = 12\nny = 8\n"), BadValue);
  CHECK_THROWS_AS(parse_config("kappa = 1\nnx = 8\nny = 8\nhz = 1\nhz_ratio = 0.1\n"), BadValue);
  CHECK_THROWS_AS(parse_config("kappa = 1\nnx = 8\nny = 8\njunk\n"), BadValue);
}

TEST_CASE("dump layout") {
  DumpMeta m{DumpKind::vertex_complex, 2, 2, 0.5, 3.0, 1.25};
  const std::string bytes = encode_dump_raw(m, std::vector<double>(8, 0.0));
  CHECK(dump_header_bytes == 4 + 2 + 1 + 4 + 4 + 8 + 8 + 8);
  CHECK(bytes.size() == dump_header_bytes + 64);
  CHECK(bytes.substr(0, 4) == "TDGL");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[5]) == 0);
  CHECK(static_cast<unsigned char>(bytes[6]) == 0);
  CHECK(static_cast<unsigned char>(bytes[7]) == 2);
  for (std::size_t k = dump_header_bytes; k < bytes.size(); ++k) CHECK(bytes[k] == 0);
  const RawDump back = decode_dump_raw(bytes);
  CHECK(back.meta.nx == 2);
  CHECK(back.meta.kappa == 3.0);
  CHECK(back.meta.t == 1.25);
  CHECK(back.consumed == bytes.size());
  // 1.0 as little-endian IEEE-754.
  const std::string one = encode_dump_raw(DumpMeta{DumpKind::cell_real, 1, 2, 1.0, 1.0, 0.0}, {1.0});
  CHECK(static_cast<unsigned char>(one[dump_header_bytes + 7]) == 0x3f);
  CHECK(static_cast<unsigned char>(one[dump_header_bytes + 6]) == 0xf0);
}

TEST_CASE("dump round trips are bitwise") {
  const GridSpec g(8, 6, 0.37);
  std::mt19937_64 rng(81);
  const ScalarField psi = oracle::random_psi(g, rng);
  const RealVectorField a = oracle::random_potential(g, rng);
  CellField b(g, Location::cell);
  for (auto& v : b.values()) v = std::normal_distribution<double>()(rng);

  const Dump dp = read_dump(write_dump(psi, 2.5, 7.0));
  CHECK(std::get<ScalarField>(dp.field) == psi);
  CHECK(dp.meta.kappa == 2.5);
  CHECK(dp.meta.t == 7.0);
  CHECK(std::get<RealVectorField>(read_dump(write_dump(a, 2.5, 7.0)).field) == a);
  CHECK(std::get<CellField>(read_dump(write_dump(b, 2.5, 7.0)).field) == b);
}

TEST_CASE("dump errors") {
  const GridSpec g(4, 4, 1.0);
  const std::string good = write_dump(ScalarField(g, Location::vertex), 1.0, 0.0);
  CHECK_THROWS_AS(read_dump(good.substr(0, good.size() - 1)), TruncatedPayload);
  CHECK_THROWS_AS(read_dump(good.substr(0, 20)), TruncatedPayload);
  std::string bad = good;
  bad[0] = 'X';
  CHECK_THROWS_AS(read_dump(bad), BadMagic);
  bad = good;
  bad[4] = 2;
  CHECK_THROWS_AS(read_dump(bad), BadVersion);
  bad = good;
  bad[6] = 9;
  CHECK_THROWS_AS(read_dump(bad), DumpError);
}

TEST_CASE("checkpoint round trip") {
  SimConfig cfg;
  cfg.grid = GridSpec(8, 8, 0.5);
  cfg.kappa = 3.0;
  cfg.hz = 0.5;
  SimState s = initial_state(cfg);
  for (int n = 0; n < 7; ++n) full_step(s, cfg);
  const SimState back = decode_checkpoint(encode_checkpoint(s, cfg.kappa), cfg.sigma, cfg.dt);
  CHECK(back.psi == s.psi);
  CHECK(back.a == s.a);
  CHECK(back.phi == s.phi);
  CHECK(back.t == s.t);
  CHECK(back.step == 7);
}

TEST_CASE("PGM encoding") {
  const GridSpec g(4, 5, 1.0);
  const std::string flat = encode_pgm(Field2D<double>(g, Location::vertex, 3.0));
  const std::string header = "P5\n4 5\n255\n";
  CHECK(flat.substr(0, header.size()) == header);
  REQUIRE(flat.size() == header.size() + 20);
  for (std::size_t k = header.size(); k < flat.size(); ++k) CHECK(static_cast<unsigned char>(flat[k]) == 128);

  Field2D<double> ramp(g, Location::vertex);
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i < 4; ++i) ramp(i, j) = g.y(j);
  }
  const std::string img = encode_pgm(ramp);
  CHECK(static_cast<unsigned char>(img[header.size()]) == 0);
  CHECK(static_cast<unsigned char>(img[header.size() + 19]) == 255);

  const fs::path dir = scratch_dir("pgm");
  render_pgm(ramp, dir / "r.pgm");
  CHECK(read_file(dir / "r.pgm") == img);
  CHECK(!fs::exists(dir / "r.pgm.tmp"));
  CHECK_THROWS_AS(render_pgm(ramp, dir / "missing" / "r.pgm"), IoError);
}

TEST_CASE("CSV schemas") {
  ComparisonRecord r;
  r.kappa = 40;
  r.delta_psi = 0.5;
  r.delta_bz = 0.25;
  r.vortex_count = 12;
  const std::string csv = records_csv({r});
  CHECK(csv.rfind("kappa,delta_psi,delta_bz,vortex_count\n", 0) == 0);
  CHECK(csv.find("40,0.5,0.25,12\n") != std::string::npos);
  SweepResult res;
  res.fit_psi = LogLogFit{-2.0, 1.0, 0.99};
  const std::string fit = fit_csv(res);
  CHECK(fit.rfind("metric,slope,intercept,r2\n", 0) == 0);
  CHECK(fit.find("delta_psi,-2,1,0.98999999999999999\n") != std::string::npos);
  CHECK(fit.find("delta_bz,nan,nan,nan\n") != std::string::npos);
}

TEST_CASE("command line") {
  const fs::path dir = scratch_dir("cli");
  const fs::path cfg = dir / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "kappa = 4\nnx = 16\nny = 16\nhz_ratio = 0.2\ncheckpoint_every = 10\nout_dir = " << (dir / "out").string()
        << "\n";
  }
  CHECK(cli({"run", "--config", cfg.string(), "--steps", "30"}) == exit_ok);
  for (const char* f : {"psi.tdgl", "a.tdgl", "bz.tdgl", "run.csv", "checkpoint.tdgl"}) {
    CHECK(fs::exists(dir / "out" / f));
  }
  const std::string csv = read_file(dir / "out" / "run.csv");
  CHECK(csv.rfind("t,free_energy,vortex_count\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  // Resuming reproduces the uninterrupted run bitwise.
  const std::string straight = read_file(dir / "out" / "psi.tdgl");
  CHECK(cli({"run", "--config", cfg.string(), "--steps", "20"}) == exit_ok);
  fs::copy_file(dir / "out" / "checkpoint.tdgl", dir / "ck.tdgl");
  CHECK(cli({"run", "--config", cfg.string(), "--steps", "30", "--resume", (dir / "ck.tdgl").string()}) == exit_ok);
  CHECK(read_file(dir / "out" / "psi.tdgl") == straight);

  CHECK(cli({"render", "--in", (dir / "out" / "psi.tdgl").string(), "--out", (dir / "psi.pgm").string()}) == exit_ok);
  CHECK(read_file(dir / "psi.pgm").rfind("P5\n16 16\n255\n", 0) == 0);
  CHECK(cli({"render", "--in", (dir / "out" / "bz.tdgl").string(), "--out", (dir / "bz.pgm").string()}) == exit_ok);
  CHECK(read_file(dir / "bz.pgm").rfind("P5\n16 15\n255\n", 0) == 0);

  CHECK(cli({"frobnicate"}) == exit_usage);
  CHECK(cli({}) == exit_usage);
  CHECK(cli({"run"}) == exit_usage);
  CHECK(cli({"run", "--config", (dir / "nope.cfg").string()}) == exit_io);
  CHECK(cli({"render", "--in", cfg.string(), "--out", (dir / "x.pgm").string()}) == exit_io);
  {
    std::ofstream out(dir / "bad.cfg");
    out << "kappa = 4\nnx = 16\nny = 16\ndt = -1\n";
  }
  CHECK(cli({"run", "--config", (dir / "bad.cfg").string()}) == exit_usage);
  {
    std::ofstream out(dir / "stiff.cfg");
    out << "kappa = 4\nnx = 16\nny = 16\ncg_max_iter = 1\ncg_tol = 1e-15\nout_dir = " << (dir / "o2").string() << "\n";
  }
  CHECK(cli({"run", "--config", (dir / "stiff.cfg").string(), "--steps", "3"}) == exit_nonconvergence);

  {
    std::ofstream out(dir / "sweep.cfg");
    out << "nx = 8\nny = 8\nkappas = 2,4,8,16,32\nhz_ratio = 0.3\nsteps = 30\nhorizon = 4\nout_dir = "
        << (dir / "sw").string() << "\n";
  }
  CHECK(cli({"sweep", "--config", (dir / "sweep.cfg").string()}) == exit_ok);
  const std::string rec = read_file(dir / "sw" / "sweep_records.csv");
  CHECK(std::count(rec.begin(), rec.end(), '\n') == 5);
  CHECK(read_file(dir / "sw" / "sweep_fit.csv").find("delta_psi,") != std::string::npos);
  CHECK(cli({"compare", "--config", (dir / "sweep.cfg").string()}) == exit_ok);
  const std::string cmp = read_file(dir / "sw" / "compare_records.csv");
  CHECK(std::count(cmp.begin(), cmp.end(), '\n') == 6);
}

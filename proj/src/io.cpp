#include "tdgl/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tdgl {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v, int line) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out)) {
    throw BadValue(key + ": expected a number, got '" + v + "'", line);
  }
  return out;
}

long parse_long(const std::string& key, const std::string& v, int line) {
  long out = 0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw BadValue(key + ": expected an integer, got '" + v + "'", line);
  return out;
}

void require(bool ok, const std::string& key, const std::string& why, int line) {
  if (!ok) throw BadValue(key + ": " + why, line);
}

struct Entry {
  std::string value;
  int line;
};

const std::set<std::string> known_keys = {
    "nx",  "ny",     "h",      "kappa",       "sigma", "hz_ratio", "hz",      "dt",
    "steps", "equil_tol", "cg_tol", "cg_max_iter", "seed", "kappas", "checkpoint_every",
    "out_dir", "horizon"};

void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& s, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& s, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) s.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_le(const std::string& s, std::size_t at, int n) {
  std::uint64_t v = 0;
  for (int b = 0; b < n; ++b) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[at + b])) << (8 * b);
  }
  return v;
}

double get_f64(const std::string& s, std::size_t at) { return std::bit_cast<double>(get_le(s, at, 8)); }

DumpMeta meta_for(const GridSpec& g, DumpKind kind, double kappa, double t) {
  return DumpMeta{kind, static_cast<std::uint32_t>(g.nx), static_cast<std::uint32_t>(g.ny), g.h, kappa, t};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw BadValue("expected 'key = value', got '" + body + "'", line);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!known_keys.count(key)) throw UnknownKey("unknown key '" + key + "'", line);
    if (value.empty()) throw BadValue(key + ": missing value", line);
    if (entries.count(key)) throw BadValue(key + ": given twice", line);
    entries[key] = Entry{value, line};
  }

  auto lookup = [&](const std::string& k) -> const Entry* {
    const auto it = entries.find(k);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto get_d = [&](const std::string& k, double def) {
    const Entry* e = lookup(k);
    return e ? parse_double(k, e->value, e->line) : def;
  };
  auto get_l = [&](const std::string& k, long def) {
    const Entry* e = lookup(k);
    return e ? parse_long(k, e->value, e->line) : def;
  };
  auto line_of = [&](const std::string& k) { return lookup(k) ? lookup(k)->line : 0; };

  RunConfig cfg;
  if (const Entry* e = lookup("kappas")) {
    std::stringstream list(e->value);
    std::string item;
    while (std::getline(list, item, ',')) {
      const double k = parse_double("kappas", trim(item), e->line);
      require(k > 0.0, "kappas", "entries must be positive", e->line);
      cfg.kappas.push_back(k);
    }
    require(!cfg.kappas.empty(), "kappas", "empty list", e->line);
    std::sort(cfg.kappas.begin(), cfg.kappas.end());
  }

  for (const char* k : {"nx", "ny"}) {
    if (!lookup(k)) throw MissingRequired(std::string("missing required key '") + k + "'", 0);
  }
  if (!lookup("kappa") && cfg.kappas.empty()) {
    throw MissingRequired("missing required key 'kappa' (or 'kappas')", 0);
  }

  const long nx = get_l("nx", 0);
  const long ny = get_l("ny", 0);
  const double h = get_d("h", 0.5);
  require(nx >= 4 && nx <= 1 << 20, "nx", "must be at least 4", line_of("nx"));
  require(ny >= 4 && ny <= 1 << 20, "ny", "must be at least 4", line_of("ny"));
  require(h > 0.0, "h", "must be positive", line_of("h"));
  require(is_power_of_two(static_cast<int>(nx)), "nx", "must be a power of two", line_of("nx"));
  cfg.sim.grid = GridSpec(static_cast<int>(nx), static_cast<int>(ny), h);

  cfg.sim.kappa = get_d("kappa", cfg.kappas.empty() ? 0.0 : cfg.kappas.back());
  require(cfg.sim.kappa > 0.0, "kappa", "must be positive", line_of("kappa"));
  cfg.sim.sigma = get_d("sigma", 1.0);
  require(cfg.sim.sigma > 0.0, "sigma", "must be positive", line_of("sigma"));
  cfg.sim.dt = get_d("dt", 0.4);
  require(cfg.sim.dt > 0.0, "dt", "must be positive", line_of("dt"));

  if (lookup("hz") && lookup("hz_ratio")) {
    throw BadValue("hz: give either hz or hz_ratio, not both", line_of("hz"));
  }
  if (lookup("hz")) {
    cfg.sim.hz = get_d("hz", 0.0);
  } else {
    cfg.sim.set_hz_ratio(get_d("hz_ratio", 0.088));
  }

  const long steps = get_l("steps", cfg.sim.equil_steps);
  require(steps >= 0 && steps <= 2147483647L, "steps", "must be a non-negative int", line_of("steps"));
  cfg.sim.equil_steps = static_cast<int>(steps);
  cfg.sim.equil_tol = get_d("equil_tol", cfg.sim.equil_tol);
  require(cfg.sim.equil_tol > 0.0, "equil_tol", "must be positive", line_of("equil_tol"));
  cfg.sim.cg.tol = get_d("cg_tol", cfg.sim.cg.tol);
  require(cfg.sim.cg.tol > 0.0, "cg_tol", "must be positive", line_of("cg_tol"));
  const long iters = get_l("cg_max_iter", cfg.sim.cg.max_iter);
  require(iters >= 1 && iters <= 100000000L, "cg_max_iter", "must be >= 1", line_of("cg_max_iter"));
  cfg.sim.cg.max_iter = static_cast<int>(iters);
  const long seed = get_l("seed", 0);
  require(seed >= 0, "seed", "must be non-negative", line_of("seed"));
  cfg.sim.seed = static_cast<std::uint64_t>(seed);

  cfg.checkpoint_every = get_l("checkpoint_every", 0);
  require(cfg.checkpoint_every >= 0, "checkpoint_every", "must be non-negative", line_of("checkpoint_every"));
  if (const Entry* e = lookup("out_dir")) cfg.out_dir = e->value;
  cfg.horizon = get_d("horizon", 200.0);
  require(cfg.horizon > 0.0, "horizon", "must be positive", line_of("horizon"));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

SweepPlan plan_from_config(const RunConfig& cfg) {
  if (cfg.kappas.empty()) throw MissingRequired("missing required key 'kappas'", 0);
  SweepPlan plan;
  plan.kappas = cfg.kappas;
  plan.kappa_ref = cfg.kappas.back();
  plan.hz_ratio = cfg.sim.hz_ratio();
  plan.base = cfg.sim;
  plan.horizon = cfg.horizon;
  return plan;
}

std::size_t dump_payload_count(const DumpMeta& m) {
  const std::size_t nx = m.nx;
  const std::size_t ny = m.ny;
  const std::size_t cells = ny > 0 ? nx * (ny - 1) : 0;
  switch (m.kind) {
    case DumpKind::vertex_complex:
      return 2 * nx * ny;
    case DumpKind::link_pair_real:
      return nx * ny + cells;
    case DumpKind::cell_real:
      return cells;
  }
  throw DumpError("dump: unknown field kind");
}

std::string encode_dump_raw(const DumpMeta& meta, const std::vector<double>& payload) {
  if (payload.size() != dump_payload_count(meta)) {
    throw DumpError("dump: payload length does not match the header");
  }
  std::string s;
  s.reserve(dump_header_bytes + 8 * payload.size());
  s += "TDGL";
  put_u16(s, dump_version);
  s.push_back(static_cast<char>(meta.kind));
  put_u32(s, meta.nx);
  put_u32(s, meta.ny);
  put_f64(s, meta.h);
  put_f64(s, meta.kappa);
  put_f64(s, meta.t);
  for (const double v : payload) put_f64(s, v);
  return s;
}

RawDump decode_dump_raw(const std::string& bytes, std::size_t offset) {
  if (bytes.size() < offset + 4 || bytes.compare(offset, 4, "TDGL") != 0) throw BadMagic();
  if (bytes.size() < offset + dump_header_bytes) throw TruncatedPayload("dump: truncated header");
  std::size_t at = offset + 4;
  const auto version = static_cast<unsigned>(get_le(bytes, at, 2));
  if (version != dump_version) throw BadVersion(version);
  at += 2;
  const auto kind = static_cast<unsigned char>(bytes[at++]);
  if (kind > 2) throw DumpError("dump: unknown field kind " + std::to_string(kind));
  RawDump d;
  d.meta.kind = static_cast<DumpKind>(kind);
  d.meta.nx = static_cast<std::uint32_t>(get_le(bytes, at, 4));
  d.meta.ny = static_cast<std::uint32_t>(get_le(bytes, at + 4, 4));
  d.meta.h = get_f64(bytes, at + 8);
  d.meta.kappa = get_f64(bytes, at + 16);
  d.meta.t = get_f64(bytes, at + 24);
  at += 32;
  const std::size_t n = dump_payload_count(d.meta);
  if ((bytes.size() - at) / 8 < n) throw TruncatedPayload("dump: truncated payload");
  d.payload.resize(n);
  for (std::size_t k = 0; k < n; ++k, at += 8) d.payload[k] = get_f64(bytes, at);
  d.consumed = at - offset;
  return d;
}

std::string write_dump(const ScalarField& psi, double kappa, double t) {
  std::vector<double> p;
  p.reserve(2 * psi.size());
  for (const auto& v : psi.values()) {
    p.push_back(v.real());
    p.push_back(v.imag());
  }
  return encode_dump_raw(meta_for(psi.grid(), DumpKind::vertex_complex, kappa, t), p);
}

std::string write_dump(const RealVectorField& a, double kappa, double t) {
  std::vector<double> p(a.x.values().begin(), a.x.values().end());
  p.insert(p.end(), a.y.values().begin(), a.y.values().end());
  return encode_dump_raw(meta_for(a.grid(), DumpKind::link_pair_real, kappa, t), p);
}

std::string write_dump(const CellField& b, double kappa, double t) {
  std::vector<double> p(b.values().begin(), b.values().end());
  return encode_dump_raw(meta_for(b.grid(), DumpKind::cell_real, kappa, t), p);
}

Dump read_dump(const std::string& bytes, std::size_t offset, std::size_t* consumed) {
  RawDump raw = decode_dump_raw(bytes, offset);
  if (consumed) *consumed = raw.consumed;
  GridSpec g;
  try {
    g = GridSpec(static_cast<int>(raw.meta.nx), static_cast<int>(raw.meta.ny), raw.meta.h);
  } catch (const std::invalid_argument& e) {
    throw DumpError(std::string("dump: invalid grid: ") + e.what());
  }
  const auto& p = raw.payload;
  switch (raw.meta.kind) {
    case DumpKind::vertex_complex: {
      ScalarField f(g, Location::vertex);
      for (std::size_t k = 0; k < f.size(); ++k) f[k] = cplx(p[2 * k], p[2 * k + 1]);
      return {raw.meta, std::move(f)};
    }
    case DumpKind::link_pair_real: {
      RealVectorField a(g);
      std::copy(p.begin(), p.begin() + a.x.size(), a.x.values().begin());
      std::copy(p.begin() + a.x.size(), p.end(), a.y.values().begin());
      return {raw.meta, std::move(a)};
    }
    case DumpKind::cell_real: {
      CellField b(g, Location::cell);
      std::copy(p.begin(), p.end(), b.values().begin());
      return {raw.meta, std::move(b)};
    }
  }
  throw DumpError("dump: unknown field kind");
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

std::string encode_checkpoint(const SimState& state, double kappa) {
  return write_dump(state.psi, kappa, state.t) + write_dump(state.a, kappa, state.t);
}

SimState decode_checkpoint(const std::string& bytes, double sigma, double dt) {
  std::size_t used = 0;
  Dump psi = read_dump(bytes, 0, &used);
  Dump a = read_dump(bytes, used);
  if (!std::holds_alternative<ScalarField>(psi.field) || !std::holds_alternative<RealVectorField>(a.field)) {
    throw DumpError("checkpoint: expected a psi record followed by an A record");
  }
  auto& pf = std::get<ScalarField>(psi.field);
  auto& af = std::get<RealVectorField>(a.field);
  if (!(pf.grid() == af.grid())) throw DumpError("checkpoint: psi and A grids differ");
  const long step = std::lround(psi.meta.t / dt);
  return make_state(std::move(pf), std::move(af), sigma, psi.meta.t, step);
}

std::string encode_pgm(const Field2D<double>& f) {
  const int w = f.nx();
  const int hgt = f.rows();
  std::string s = "P5\n" + std::to_string(w) + " " + std::to_string(hgt) + "\n255\n";
  const auto v = f.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  for (int j = 0; j < hgt; ++j) {
    for (int i = 0; i < w; ++i) {
      int px = 128;
      if (range > 0.0) px = static_cast<int>(std::lround(255.0 * (f(i, j) - *lo) / range));
      s.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(px, 0, 255))));
    }
  }
  return s;
}

void render_pgm(const Field2D<double>& f, const std::filesystem::path& path) {
  if (!all_finite(f)) throw std::invalid_argument("render_pgm: field has non-finite entries");
  write_file_atomic(path, encode_pgm(f));
}

std::string records_csv(const std::vector<ComparisonRecord>& records) {
  std::string s = "kappa,delta_psi,delta_bz,vortex_count\n";
  for (const auto& r : records) {
    if (r.failed) continue;
    s += fmt(r.kappa) + "," + fmt(r.delta_psi) + "," + fmt(r.delta_bz) + "," +
         std::to_string(r.vortex_count) + "\n";
  }
  return s;
}

std::string fit_csv(const SweepResult& result) {
  std::string s = "metric,slope,intercept,r2\n";
  auto row = [&](const char* name, const std::optional<LogLogFit>& f) {
    if (f) {
      s += std::string(name) + "," + fmt(f->slope) + "," + fmt(f->intercept) + "," + fmt(f->r2) + "\n";
    } else {
      s += std::string(name) + ",nan,nan,nan\n";
    }
  };
  row("delta_psi", result.fit_psi);
  row("delta_bz", result.fit_bz);
  return s;
}

}  // namespace tdgl

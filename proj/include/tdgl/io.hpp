#pragma once

// Config files, binary field dumps, checkpoints, CSV summaries and PGM
// renders.
//
// Dump layout (all little-endian):
//   "TDGL" | u16 version = 1 | u8 kind | u32 nx | u32 ny | f64 h | f64 kappa | f64 t
//   followed by f64 payload, row-major with x fastest. Kinds: 0 vertex complex
//   (re, im interleaved), 1 link pair (x-links, then y-links), 2 cell real.

#include "tdgl/integrator.hpp"
#include "tdgl/sweep.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tdgl {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnknownKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class BadValue : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class MissingRequired : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct RunConfig {
  SimConfig sim;  // sim.equil_steps holds `steps`
  std::vector<double> kappas;
  long checkpoint_every = 0;  // 0 disables checkpoints
  std::string out_dir = ".";
  double horizon = 200.0;
};

// key = value lines, '#' starts a comment. Required: nx, ny, and kappa
// unless kappas is present (kappa then defaults to max(kappas)).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

SweepPlan plan_from_config(const RunConfig& cfg);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DumpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class BadMagic : public DumpError {
 public:
  BadMagic() : DumpError("dump: bad magic") {}
};
class BadVersion : public DumpError {
 public:
  explicit BadVersion(unsigned v) : DumpError("dump: unsupported version " + std::to_string(v)) {}
};
class TruncatedPayload : public DumpError {
 public:
  using DumpError::DumpError;
};

enum class DumpKind : std::uint8_t { vertex_complex = 0, link_pair_real = 1, cell_real = 2 };

inline constexpr std::uint16_t dump_version = 1;
inline constexpr std::size_t dump_header_bytes = 39;

struct DumpMeta {
  DumpKind kind = DumpKind::vertex_complex;
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  double h = 0.0;
  double kappa = 0.0;
  double t = 0.0;
};

// Number of f64 payload values for a header.
std::size_t dump_payload_count(const DumpMeta& meta);

std::string encode_dump_raw(const DumpMeta& meta, const std::vector<double>& payload);

struct RawDump {
  DumpMeta meta;
  std::vector<double> payload;
  std::size_t consumed = 0;  // bytes read from the input
};

// Decodes one record starting at `offset`.
RawDump decode_dump_raw(const std::string& bytes, std::size_t offset = 0);

std::string write_dump(const ScalarField& psi, double kappa, double t);
std::string write_dump(const RealVectorField& a, double kappa, double t);
std::string write_dump(const CellField& b, double kappa, double t);

using AnyField = std::variant<ScalarField, RealVectorField, CellField>;

struct Dump {
  DumpMeta meta;
  AnyField field;
};

Dump read_dump(const std::string& bytes, std::size_t offset = 0, std::size_t* consumed = nullptr);

// Writes to a temporary sibling and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// Checkpoint: a psi record followed by an A record, sharing kappa and t.
std::string encode_checkpoint(const SimState& state, double kappa);
SimState decode_checkpoint(const std::string& bytes, double sigma, double dt);

// Binary P5, image row 0 is j = 0. Linear min-max scaling; a constant field
// maps to 128.
std::string encode_pgm(const Field2D<double>& f);
void render_pgm(const Field2D<double>& f, const std::filesystem::path& path);

std::string records_csv(const std::vector<ComparisonRecord>& records);
std::string fit_csv(const SweepResult& result);

}  // namespace tdgl

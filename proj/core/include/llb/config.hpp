#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "llb/field.hpp"
#include "llb/mesh.hpp"
#include "llb/params.hpp"
#include "llb/sparse.hpp"
#include "llb/studies.hpp"

namespace llb {

/// Semantic configuration error; `key` is the dotted name of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct OutputConfig {
  int snapshot_stride = 1;
  bool vtk = true;
  std::string norms_csv = "norms.csv";
  std::string table_csv = "table.csv";
  std::string decay_csv = "decay.csv";
  std::string linf_csv = "linf.csv";
  std::string energy_csv = "energy.csv";

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct StudyConfig {
  std::optional<StudyAxis> axis;   // the subcommand decides when absent
  int levels = 3;                    // h: number of nested meshes
  std::vector<int> n_sequence;       // k: doubling step counts
  std::vector<double> eps_sequence;  // eps: halving values, compared against eps = 0

  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

/// Document layout (every key optional unless noted):
///
///   preset = "sim1"            # fills every field below; explicit keys override
///   domain = "unit_square"     # interval | unit_square | unit_cube | l_shape | fichera
///   n = 32                     # subdivisions per unit length
///   T = 0.5
///   N = 200                    # required without a preset
///   [params]    kappa1, kappa2, gamma, mu, epsilon
///   [initial]   u0 = ["cos(2*pi*x)", "0", "0"]   or   preset = "sim1"
///   [output]    snapshot_stride, vtk, norms_csv, table_csv, decay_csv, linf_csv, energy_csv
///   [solver]    tol, max_iter, restart, preconditioner (automatic | jacobi | block_ilu0 | sparse_lu)
///   [study]     axis (h | k | eps), levels, n_sequence, eps_sequence
struct RunConfig {
  std::string preset;
  DomainTag domain = DomainTag::unit_square;
  int n = 1;
  SchemeParams params;
  TimeGrid time;
  std::string initial_preset;
  std::array<std::string, 3> u0{"0", "0", "0"};
  OutputConfig output;
  SolverOptions solver;
  std::optional<StudyConfig> study;

  /// Initial data as an evaluable field.
  VectorFunction initial_field() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Throws toml::ParseError on syntax errors and ConfigError on semantic ones.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// TOML text that parses back to an equal config.
std::string to_toml(const RunConfig& config);

std::string to_string(Preconditioner p);
Preconditioner parse_preconditioner(const std::string& s);

}  // namespace llb

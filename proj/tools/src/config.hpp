#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pdolab/errors.hpp"

namespace pdolab::cli {

inline constexpr int kSchemaVersion = 1;

enum class Pipeline { residue, connes, nonmeasurable, integrate, spectral_formula, modulation, sweep };

std::string to_string(Pipeline p);
Pipeline parse_pipeline(const std::string& name);

/// Raised for malformed or out-of-range configuration; `where` names the key
/// path (e.g. "symbol.bumps[0].center") and, for syntax errors, the line.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : InvalidArgument("config error at " + where + ": " + what) {}
};

struct BumpSpec {
  std::vector<double> center;
  double half_width = 2.5;
  std::optional<double> amplitude;
  std::optional<double> integral;  ///< exactly one of amplitude / integral
};

enum class SymbolKindSpec { classical, zero, nonmeasurable };
enum class Angular { even, odd };

struct SymbolSpec {
  SymbolKindSpec kind = SymbolKindSpec::classical;
  std::vector<BumpSpec> bumps;  ///< empty -> one centred bump, half-width 2.5, integral 1
  Angular angular = Angular::even;
  double cutoff = 1.0;
};

enum class IntegrandKind { one_plus_cos, bumps };

struct IntegrandSpec {
  IntegrandKind kind = IntegrandKind::one_plus_cos;
  std::vector<BumpSpec> bumps;
  std::optional<double> reference_integral;
  std::size_t diagonal_n_max = 100000;
  std::size_t diagonal_points = 40;
};

enum class GridKind { none, doubly_exponential, geometric, list };

/// n grid: doubly-exponential t values, a geometric integer grid, or an
/// explicit list of n.
struct GridSpec {
  GridKind kind = GridKind::none;
  std::vector<double> t;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;
  std::vector<double> values;
};

struct Tolerances {
  double relative = 0.10;
  double absolute = 0.05;
  double measurability = 0.05;
  double min_band_width = 1.5;
  double slope = 0.10;
  double diagonal = 0.02;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  Pipeline pipeline = Pipeline::connes;
  Pipeline sweep_pipeline = Pipeline::connes;
  int d = 1;
  int K = 256;
  bool K_given = false;  ///< integrate only runs its eigenvalue path when K is set
  std::vector<int> K_list;
  bool K_list_given = false;
  std::optional<std::size_t> n_window;
  std::optional<int> levels;
  GridSpec n_grid;
  std::optional<double> log_tail_start;
  SymbolSpec symbol;
  IntegrandSpec integrand;
  Tolerances tolerances;
  std::filesystem::path csv;
  std::filesystem::path report;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError. `source` labels diagnostics (usually the file name).
ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Range checks shared by file and flag input.
void validate(ExperimentConfig& config);

}  // namespace pdolab::cli

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughlab/budget.hpp"
#include "roughlab/corpus.hpp"
#include "roughlab/error.hpp"
#include "roughlab/sphere.hpp"

namespace roughlab {

/// Config rejected by the schema; the message starts with the offending key path.
class SchemaError : public ConfigurationError {
 public:
  SchemaError(const std::string& path, const std::string& problem);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline constexpr int kConfigFormatVersion = 1;

enum class Command { solve, check_lemma1, check_prop1, check_ps, check_beta, check_scaling, smallness_scan, budget };

std::string to_string(Command command);
Command command_from_string(const std::string& name);
const std::vector<std::string>& command_names();

struct GridConfig {
  int n = 2;
  int points = 64;
  double box_length = 32.0;
};

struct TimeGridConfig {
  double t_min = 0.0;
  double t_max = 0.0;
  int count = 0;
};

struct ForceConfig {
  /// none, steady or power; the profile is the data profile.
  std::string kind = "none";
  double exponent = 0.0;
  double scale = 1.0;
};

struct SolverConfig {
  /// Width w of the data profile exp(-|x|^2 / (2 w^2)); T2 uses its x_1-derivative.
  double data_width = 1.0;
  double data_scale = 1.0;
  /// When set, data_scale is chosen so the weighted data norm equals this value.
  std::optional<double> data_norm;
  ForceConfig force;
  /// Empty (count == 0) selects the default time grid.
  TimeGridConfig times;
  int max_iterations = 40;
  double tolerance = 1e-10;
  bool snapshots = true;
  /// smallness-scan amplitudes, applied to data and force alike.
  std::vector<double> scales;
};

struct BetaConfig {
  /// Explicit pairs; empty selects the bilinear and force pairs of the budget.
  std::vector<ExponentPair> pairs;
  std::vector<double> times{0.25, 0.5, 1.0, 2.0, 4.0};
};

struct PoincareConfig {
  double q = 2.0;
  double sigma = 2.0;
  int centers = 20;
  int radii = 4;
  std::uint64_t seed = 7;
};

struct ScalingConfig {
  double lambda = 2.0;
  double data_width = 0.5;
};

struct InequalityConfig {
  int dilation_pairs = 4;
  double dilation_tolerance = 0.01;
  bool pointwise = true;
};

/// One experiment; every section has defaults so a config names only what it changes.
struct ExperimentConfig {
  int format_version = kConfigFormatVersion;
  Command command = Command::budget;
  std::optional<std::string> output_dir;
  int workers = 1;
  GridConfig grid;
  KernelSpec kernel;
  BudgetInputs budget;
  CorpusSpec corpus;
  SolverConfig solver;
  BetaConfig beta;
  PoincareConfig poincare;
  ScalingConfig scaling;
  InequalityConfig inequality;
  /// The document as given, for hashing and echoing.
  nlohmann::json source;
};

/// Validates the whole document before anything is computed; unknown keys and
/// ill-typed values raise SchemaError naming the key path (e.g. "solver.times.count").
ExperimentConfig parse_config(const nlohmann::json& document);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) serialization, as 16 hex digits.
std::string config_hash(const nlohmann::json& document);

}  // namespace roughlab

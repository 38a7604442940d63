#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughlab/config.hpp"

namespace roughlab {

inline constexpr const char* kCodeVersion = "0.1.0";
/// Consulted when the config names no output directory.
inline constexpr const char* kOutputDirEnv = "ROUGHLAB_OUTPUT_DIR";
inline constexpr const char* kDefaultOutputDir = "roughlab-out";
inline constexpr const char* kCalibrationFile = "calibration.json";
inline constexpr const char* kManifestFile = "manifest.json";

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string code_version = kCodeVersion;
  std::string started;
  std::string finished;
  std::string output_dir;
  int workers = 1;
  /// Emitted files relative to output_dir, in writing order (the manifest itself excluded).
  std::vector<std::string> files;
  std::vector<CheckOutcome> checks;
  /// Set when the run stopped on an exception; the run then counts as failed.
  std::optional<std::string> error;

  bool pass() const;
  nlohmann::json to_json() const;
};

struct RunOverrides {
  std::optional<std::string> output_dir;
  std::optional<int> workers;
};

/// Output directory: override, then config, then $ROUGHLAB_OUTPUT_DIR, then ./roughlab-out.
std::string resolve_output_dir(const ExperimentConfig& config, const RunOverrides& overrides = {});

/// Executes the configured command, writes its tables and summaries, and always writes
/// manifest.json (also when the command throws; the exception is recorded, not rethrown).
/// A solve is refused with "calibration required" unless calibration.json in the output
/// directory records passing beta checks for both exponent pairs of its budget.
RunManifest run(const ExperimentConfig& config, const RunOverrides& overrides = {});

/// 0 when every check passed, 1 when a check failed, 2 when the run raised an error.
int exit_code(const RunManifest& manifest);

}  // namespace roughlab

#pragma once

#include <filesystem>
#include <string>

#include "sfreject/experiment.hpp"

namespace sfreject::cli {

/// Everything one CLI invocation needs. Loaded from an INI-style file
/// (`[section]` headers, `key = value` lines, `;` or `#` comments), then
/// overridden by command-line flags.
struct RunConfig {
  std::filesystem::path dataset;
  std::string label_column = "label";
  bool impute_missing = false;
  /// Defaults to the dataset file stem.
  std::string dataset_name;
  ExperimentConfig experiment;
  std::filesystem::path out_dir;
  bool verbose = false;

  /// Throws ConfigError on any invariant violation.
  void validate() const;
};

/// Reads `path` into `config`, replacing only the keys present. Unknown
/// sections or keys raise ConfigError.
void load_config_file(const std::filesystem::path& path, RunConfig& config);

/// "knee" or a real in (0, 1].
std::optional<double> parse_theta(const std::string& text);

}  // namespace sfreject::cli

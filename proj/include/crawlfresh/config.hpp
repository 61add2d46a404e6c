#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "crawlfresh/experiments.hpp"

namespace crawlfresh {

/// Configuration/usage problem; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Built-in defaults for a subcommand (simulate, estimate, optimize,
/// expt1, expt2, expt3).
nlohmann::json default_config(std::string_view subcommand);

/// Parses a JSON config file; throws ConfigError on IO or syntax problems.
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Deep merge: objects merge recursively, everything else is replaced.
void merge_config(nlohmann::json& base, const nlohmann::json& overlay);

/// Applies one "dotted.path=value" override. The value is parsed as JSON
/// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& config, std::string_view assignment);

/// Rejects keys outside the documented schema with ConfigError.
void validate_config_keys(const nlohmann::json& config);

/// Typed view of the JSON config. Validates keys, types, and invariants;
/// every problem surfaces as ConfigError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& config);

/// Resolved-config echo for the run manifest.
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

}  // namespace crawlfresh

#pragma once

#include <filesystem>
#include <string_view>

#include "crawlfresh/experiments.hpp"

namespace crawlfresh {

/// Runs the named experiment (expt1, expt2, expt3), writes `<name>.csv` and
/// `manifest.json` into out_dir, and returns the CSV path. Identical config
/// and seed give byte-identical files.
std::filesystem::path run_experiment_to_dir(
    std::string_view experiment, const ExperimentConfig& config,
    const std::filesystem::path& out_dir);

}  // namespace crawlfresh

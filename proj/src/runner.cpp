#include "crawlfresh/runner.hpp"

#include <fstream>

#include "crawlfresh/config.hpp"
#include "crawlfresh/csv.hpp"
#include "crawlfresh/version.hpp"

namespace crawlfresh {

namespace fs = std::filesystem;

std::filesystem::path run_experiment_to_dir(std::string_view experiment,
                                            const ExperimentConfig& config,
                                            const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / (std::string(experiment) + ".csv");
  std::ofstream os(csv_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + csv_path.string());

  if (experiment == "expt1") {
    write_expt1_csv(os, expt1_comparison(config));
  } else if (experiment == "expt2") {
    write_expt2_csv(os, expt2_freshness(config));
  } else if (experiment == "expt3") {
    write_expt3_csv(os, expt3_schedule_sweep(config), config.pages.at(0).delta);
  } else {
    throw std::invalid_argument("unknown experiment: " + std::string(experiment));
  }
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + csv_path.string());

  nlohmann::json manifest = {
      {"artifact", "crawlfresh"},
      {"version", kVersion},
      {"experiment", std::string(experiment)},
      {"master_seed", config.master_seed},
      {"config", experiment_config_to_json(config)},
  };
  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream ms(manifest_path, std::ios::binary);
  if (!ms) throw std::runtime_error("cannot write " + manifest_path.string());
  ms << manifest.dump(2) << '\n';
  if (!ms) throw std::runtime_error("write failed: " + manifest_path.string());
  return csv_path;
}

}  // namespace crawlfresh

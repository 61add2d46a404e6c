#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crawlfresh/config.hpp"
#include "crawlfresh/csv.hpp"
#include "crawlfresh/runner.hpp"
#include "crawlfresh/version.hpp"

namespace fs = std::filesystem;
using crawlfresh::ConfigError;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::int64_t> record_every;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", flags.out_dir, "output directory (default: out)");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (0 = hardware concurrency)");
  cmd->add_option("--set", flags.overrides,
                  "config override as dotted.path=value (repeatable)");
  cmd->add_option("--record-every", flags.record_every,
                  "record every N steps (0 = log-spaced grid)");
}

json build_config(const std::string& subcommand, const CommonFlags& flags) {
  json cfg = crawlfresh::default_config(subcommand);
  if (!flags.config_path.empty())
    crawlfresh::merge_config(cfg, crawlfresh::load_config_file(flags.config_path));
  for (const auto& assignment : flags.overrides)
    crawlfresh::apply_override(cfg, assignment);
  if (flags.seed) cfg["master_seed"] = *flags.seed;
  if (flags.threads) cfg["threads"] = *flags.threads;
  if (flags.record_every) cfg["record_every"] = *flags.record_every;
  crawlfresh::validate_config_keys(cfg);
  return cfg;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_manifest(const std::string& subcommand,
                    const crawlfresh::ExperimentConfig& config,
                    const fs::path& out_dir) {
  json manifest = {
      {"artifact", "crawlfresh"},
      {"version", crawlfresh::kVersion},
      {"experiment", subcommand},
      {"master_seed", config.master_seed},
      {"config", crawlfresh::experiment_config_to_json(config)},
  };
  auto os = open_output(out_dir / "manifest.json");
  os << manifest.dump(2) << '\n';
}

void require(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

int run_simulate(const CommonFlags& flags) {
  const auto cfg = crawlfresh::experiment_config_from_json(
      build_config("simulate", flags));
  require(cfg.pages.size() == 1 && !cfg.recipe, "simulate needs a single page");

  const crawlfresh::RandomSource root(cfg.master_seed);
  auto rep = root.stream(0);
  auto change_rng = rep.stream(0);
  auto crawl_rng = rep.stream(1);
  const auto timeline = crawlfresh::simulate_timeline(
      cfg.pages.front(), cfg.horizon, change_rng, crawl_rng);
  const auto observations = crawlfresh::derive_observations(timeline);

  fs::create_directories(flags.out_dir);
  {
    auto os = open_output(fs::path(flags.out_dir) / "timeline.csv");
    crawlfresh::write_timeline_csv(os, timeline);
  }
  {
    auto os = open_output(fs::path(flags.out_dir) / "observations.csv");
    crawlfresh::write_observations_csv(os, observations);
  }
  write_manifest("simulate", cfg, flags.out_dir);
  return 0;
}

int run_estimate(const CommonFlags& flags, const std::vector<std::string>& kinds) {
  json raw = build_config("estimate", flags);
  if (!kinds.empty()) raw["estimators"] = kinds;
  const auto cfg = crawlfresh::experiment_config_from_json(raw);
  require(cfg.pages.size() == 1 && !cfg.recipe, "estimate needs a single page");
  require(!cfg.estimators.empty(), "estimate needs at least one estimator");

  const crawlfresh::RandomSource root(cfg.master_seed);
  auto rep = root.stream(0);
  auto change_rng = rep.stream(0);
  auto crawl_rng = rep.stream(1);
  const auto timeline = crawlfresh::simulate_observation_window(
      cfg.pages.front(), static_cast<std::size_t>(cfg.observations), change_rng,
      crawl_rng);
  const auto observations = crawlfresh::derive_observations(timeline);
  const auto grid = cfg.record_grid();

  std::vector<crawlfresh::LabeledTrajectory> rows;
  for (const auto& spec : cfg.estimators) {
    crawlfresh::LabeledTrajectory tr;
    tr.estimator = spec.label();
    tr.seed = cfg.master_seed;
    tr.points = crawlfresh::run_stream(spec.kind, observations,
                                       cfg.pages.front().crawl_rate,
                                       spec.schedule, spec.y0, grid, cfg.clip);
    rows.push_back(std::move(tr));
  }

  fs::create_directories(flags.out_dir);
  auto os = open_output(fs::path(flags.out_dir) / "trajectories.csv");
  crawlfresh::write_trajectories_csv(os, rows);
  write_manifest("estimate", cfg, flags.out_dir);
  return 0;
}

int run_optimize(const CommonFlags& flags, std::optional<double> budget) {
  json raw = build_config("optimize", flags);
  if (budget) raw["budget"] = *budget;
  const auto cfg = crawlfresh::experiment_config_from_json(raw);
  require(cfg.budget >= 0.0, "optimize needs a budget");
  require(!cfg.pages.empty() || cfg.recipe.has_value(),
          "optimize needs pages or a recipe");

  std::vector<crawlfresh::PageSpec> pages;
  if (cfg.recipe) {
    const auto& rc = *cfg.recipe;
    const double crawl_rate =
        rc.crawl_rate > 0.0 ? rc.crawl_rate
                            : cfg.budget / static_cast<double>(rc.count);
    const crawlfresh::RandomSource root(cfg.master_seed);
    auto delta_rng = root.stream(0).stream(0);
    for (std::size_t i = 0; i < rc.count; ++i) {
      double delta = delta_rng.uniform(rc.delta_low, rc.delta_high);
      while (!(delta > 0.0))
        delta = delta_rng.uniform(rc.delta_low, rc.delta_high);
      pages.push_back({static_cast<int>(i), delta, rc.weight,
                       crawl_rate > 0.0 ? crawl_rate : 1.0});
    }
  } else {
    pages = cfg.pages;
  }

  const auto plan = crawlfresh::optimize(pages, cfg.budget);

  fs::create_directories(flags.out_dir);
  {
    auto os = open_output(fs::path(flags.out_dir) / "plan.csv");
    crawlfresh::write_plan_csv(os, plan, pages);
  }
  {
    auto os = open_output(fs::path(flags.out_dir) / "objective.csv");
    crawlfresh::write_objective_csv(os, plan.budget, plan.objective);
  }
  write_manifest("optimize", cfg, flags.out_dir);
  return 0;
}

int run_experiment(const std::string& name, const CommonFlags& flags) {
  const auto cfg = crawlfresh::experiment_config_from_json(build_config(name, flags));
  if (name == "expt1" || name == "expt3") {
    require(cfg.pages.size() == 1 && !cfg.recipe,
            "this experiment needs a single page");
  } else {
    require(cfg.budget > 0.0, "expt2 needs a positive budget");
    require(!cfg.pages.empty() || cfg.recipe.has_value(),
            "expt2 needs pages or a recipe");
  }
  if (name == "expt1") require(!cfg.estimators.empty(), "expt1 needs estimators");
  crawlfresh::run_experiment_to_dir(name, cfg, flags.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crawlfresh: online page-change-rate estimation and "
               "bandwidth-constrained crawl scheduling"};
  app.set_version_flag("--version", crawlfresh::kVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<std::string> estimator_kinds;
  std::optional<double> budget;

  auto* simulate = app.add_subcommand(
      "simulate", "sample a change/crawl timeline and its observations");
  add_common_flags(simulate, flags);

  auto* estimate = app.add_subcommand(
      "estimate", "run estimators over one simulated observation stream");
  add_common_flags(estimate, flags);
  estimate->add_option("--estimator", estimator_kinds,
                       "estimator kind (lln|sa|naive|mle|mm, repeatable)");

  auto* optimize = app.add_subcommand(
      "optimize", "compute budget-constrained optimal crawl rates");
  add_common_flags(optimize, flags);
  optimize->add_option("--budget", budget, "total crawl-rate budget B");

  auto* expt1 = app.add_subcommand("expt1", "estimator comparison with bands");
  add_common_flags(expt1, flags);
  auto* expt2 = app.add_subcommand("expt2", "estimate-driven crawl plans vs benchmark");
  add_common_flags(expt2, flags);
  auto* expt3 = app.add_subcommand("expt3", "gain-schedule sweep");
  add_common_flags(expt3, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(flags);
    if (estimate->parsed()) return run_estimate(flags, estimator_kinds);
    if (optimize->parsed()) return run_optimize(flags, budget);
    if (expt1->parsed()) return run_experiment("expt1", flags);
    if (expt2->parsed()) return run_experiment("expt2", flags);
    if (expt3->parsed()) return run_experiment("expt3", flags);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

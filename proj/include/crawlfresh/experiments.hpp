#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crawlfresh/change_process.hpp"
#include "crawlfresh/estimators.hpp"
#include "crawlfresh/freshness_opt.hpp"

namespace crawlfresh {

/// An estimator together with the schedule/initialization it runs with.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::lln;
  std::optional<GainSchedule> schedule;
  double y0 = 0.0;

  /// Kind name only ("lln", "sa", ...).
  std::string label() const;
  /// Kind plus schedule token ("lln:k^0.75", "sa:(k+1)^-0.75").
  std::string variant_label() const;
};

/// Pages sampled per replication: delta_i ~ U[delta_low, delta_high].
struct PageRecipe {
  std::size_t count = 100;
  double delta_low = 0.0;
  double delta_high = 1.0;
  double weight = 1.0;
  double crawl_rate = 0.0;  // <= 0 means budget / count

  void validate() const;
};

struct ExperimentConfig {
  std::vector<PageSpec> pages;       // explicit pages, or
  std::optional<PageRecipe> recipe;  // a per-replication sampling recipe
  double budget = 0.0;
  std::int64_t observations = 10000;  // K, crawls per page per replication
  int replications = 1;
  std::uint64_t master_seed = 1;
  std::int64_t record_every = 0;  // 0 selects the log-spaced grid
  std::vector<EstimatorSpec> estimators;
  ClipRange clip;
  int threads = 0;  // 0 means hardware concurrency
  double horizon = 1e4;
  bool check_empirical_freshness = false;

  void validate() const;
  std::vector<std::int64_t> record_grid() const;
};

struct SummaryRow {
  std::int64_t k = 0;
  double mean = 0.0;
  double lo95 = 0.0;  // empirical 2.5% quantile
  double hi95 = 0.0;  // empirical 97.5% quantile
};

/// Per-(label, recorded step, replication) estimate values plus the summary
/// reductions the experiment CSVs report.
struct TrajectoryBundle {
  std::vector<std::int64_t> ks;
  std::vector<std::string> labels;
  std::vector<std::vector<std::vector<double>>> values;  // [label][k][rep]

  std::size_t label_index(std::string_view label) const;
  SummaryRow summary(std::size_t label_idx, std::size_t k_idx) const;
  SummaryRow abs_error_summary(std::size_t label_idx, std::size_t k_idx,
                               double truth) const;
  double mean_abs_error(std::size_t label_idx, std::size_t k_idx,
                        double truth) const;
};

/// Expt 1: one page, fresh timelines per replication, every configured
/// estimator on the common observation stream.
TrajectoryBundle expt1_comparison(const ExperimentConfig& config);

/// Expt 2 output. F values are always evaluated under the true deltas;
/// the benchmark and uniform baselines are constant in k.
struct Expt2Result {
  std::vector<std::int64_t> ks;  // starts at 0 (initial estimates)
  std::vector<std::string> estimators;
  std::vector<std::vector<std::vector<double>>> f_achieved;  // [est][k][rep]
  std::vector<double> f_benchmark;  // per replication
  std::vector<double> f_uniform;    // per replication
  std::vector<double> f_empirical;  // optional sweep cross-check, per rep

  double mean_achieved(std::size_t est_idx, std::size_t k_idx) const;
  double mean_benchmark() const;
  double mean_uniform() const;
};

/// Expt 2: estimate-driven crawl plans vs the true-delta benchmark.
/// Observations are generated under the initial (uniform) crawl rates;
/// estimates never feed back into the observation process.
Expt2Result expt2_freshness(const ExperimentConfig& config);

/// Standard sweep: LLN with alpha_k in {1, log k, k^0.75} and SA with
/// eta_k = (k+1)^-gamma for gamma in {0.5, 0.75, 1}.
std::vector<EstimatorSpec> default_expt3_variants(double y0 = 0.0);

/// Expt 3: one page, all schedule variants on the same observation stream
/// within each replication (common random numbers).
TrajectoryBundle expt3_schedule_sweep(const ExperimentConfig& config);
TrajectoryBundle expt3_schedule_sweep(const ExperimentConfig& config,
                                      const std::vector<EstimatorSpec>& variants);

/// Least-squares slope of log mean-abs-error against log k over recorded
/// steps in [k_min, k_max]. Needs at least two recorded steps in range.
double rate_slope(const TrajectoryBundle& bundle, std::string_view label,
                  double truth, std::int64_t k_min, std::int64_t k_max);

/// Empirical quantile (linear interpolation) of an ascending-sorted sample.
double quantile(std::span<const double> sorted_values, double q);

}  // namespace crawlfresh

#include "crawlfresh/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace crawlfresh {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Replication-indexed loop. Each index writes only its own output slots, so
// results do not depend on the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

void require_unique_labels(const std::vector<std::string>& labels) {
  auto sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("estimator labels must be unique");
}

double initial_estimate(const EstimatorSpec& spec, const ClipRange& clip) {
  switch (spec.kind) {
    case EstimatorKind::sa: return spec.y0;
    case EstimatorKind::mle:
    case EstimatorKind::mm: return clip.min;
    default: return 0.0;
  }
}

}  // namespace

std::string EstimatorSpec::label() const { return std::string(to_string(kind)); }

std::string EstimatorSpec::variant_label() const {
  std::string out = label();
  if (schedule) {
    out += ':';
    out += schedule->label();
  }
  return out;
}

void PageRecipe::validate() const {
  if (count < 1) throw std::invalid_argument("PageRecipe: count must be >= 1");
  if (!(delta_low >= 0.0) || !(delta_high > delta_low))
    throw std::invalid_argument("PageRecipe: need 0 <= delta_low < delta_high");
  if (!(weight >= 0.0)) throw std::invalid_argument("PageRecipe: weight must be >= 0");
  if (!std::isfinite(crawl_rate) || crawl_rate < 0.0)
    throw std::invalid_argument("PageRecipe: crawl_rate must be >= 0");
}

void ExperimentConfig::validate() const {
  if (replications < 1)
    throw std::invalid_argument("ExperimentConfig: replications must be >= 1");
  if (observations < 1)
    throw std::invalid_argument("ExperimentConfig: observations must be >= 1");
  if (record_every < 0)
    throw std::invalid_argument("ExperimentConfig: record_every must be >= 0");
  if (threads < 0)
    throw std::invalid_argument("ExperimentConfig: threads must be >= 0");
  if (!(horizon > 0.0))
    throw std::invalid_argument("ExperimentConfig: horizon must be > 0");
  clip.validate();
  if (recipe) {
    if (!pages.empty())
      throw std::invalid_argument("ExperimentConfig: give pages or a recipe, not both");
    recipe->validate();
  }
  for (const auto& p : pages) p.validate();
}

std::vector<std::int64_t> ExperimentConfig::record_grid() const {
  return record_every == 0 ? log_grid(observations)
                           : arithmetic_grid(observations, record_every);
}

std::size_t TrajectoryBundle::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw std::invalid_argument("unknown label: " + std::string(label));
}

double quantile(std::span<const double> sorted_values, double q) {
  if (sorted_values.empty())
    throw std::invalid_argument("quantile: empty sample");
  if (q <= 0.0) return sorted_values.front();
  if (q >= 1.0) return sorted_values.back();
  const double h = static_cast<double>(sorted_values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

namespace {

SummaryRow summarize(std::int64_t k, std::vector<double> vals) {
  const double mean =
      std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
  std::sort(vals.begin(), vals.end());
  return {k, mean, quantile(vals, 0.025), quantile(vals, 0.975)};
}

}  // namespace

SummaryRow TrajectoryBundle::summary(std::size_t label_idx, std::size_t k_idx) const {
  return summarize(ks[k_idx], values[label_idx][k_idx]);
}

SummaryRow TrajectoryBundle::abs_error_summary(std::size_t label_idx,
                                               std::size_t k_idx,
                                               double truth) const {
  auto errs = values[label_idx][k_idx];
  for (double& v : errs) v = std::abs(v - truth);
  return summarize(ks[k_idx], std::move(errs));
}

double TrajectoryBundle::mean_abs_error(std::size_t label_idx, std::size_t k_idx,
                                        double truth) const {
  const auto& vals = values[label_idx][k_idx];
  double acc = 0.0;
  for (double v : vals) acc += std::abs(v - truth);
  return acc / static_cast<double>(vals.size());
}

namespace {

// Shared core of expt1 and expt3: one page, fresh streams per replication,
// every spec folded over the replication's common observation stream.
TrajectoryBundle single_page_sweep(const ExperimentConfig& cfg,
                                   const std::vector<EstimatorSpec>& specs,
                                   bool variant_labels) {
  cfg.validate();
  if (cfg.recipe || cfg.pages.size() != 1)
    throw std::invalid_argument("experiment needs exactly one explicit page");
  if (specs.empty()) throw std::invalid_argument("no estimators configured");

  const PageSpec page = cfg.pages.front();
  const auto grid = cfg.record_grid();
  const int reps = cfg.replications;

  TrajectoryBundle bundle;
  bundle.ks = grid;
  for (const auto& s : specs)
    bundle.labels.push_back(variant_labels ? s.variant_label() : s.label());
  if (!variant_labels) require_unique_labels(bundle.labels);
  bundle.values.assign(
      specs.size(),
      std::vector<std::vector<double>>(grid.size(),
                                       std::vector<double>(reps, 0.0)));

  const RandomSource root(cfg.master_seed);
  parallel_for(reps, cfg.threads, [&](int r) {
    auto rep = root.stream(static_cast<std::uint64_t>(r));
    auto change_rng = rep.stream(0);
    auto crawl_rng = rep.stream(1);
    const auto timeline = simulate_observation_window(
        page, static_cast<std::size_t>(cfg.observations), change_rng, crawl_rng);
    const auto obs = derive_observations(timeline);
    for (std::size_t e = 0; e < specs.size(); ++e) {
      const auto traj = run_stream(specs[e].kind, obs, page.crawl_rate,
                                   specs[e].schedule, specs[e].y0, grid, cfg.clip);
      for (std::size_t ki = 0; ki < grid.size(); ++ki)
        bundle.values[e][ki][r] = traj[ki].estimate;
    }
  });
  return bundle;
}

}  // namespace

TrajectoryBundle expt1_comparison(const ExperimentConfig& config) {
  return single_page_sweep(config, config.estimators, /*variant_labels=*/false);
}

std::vector<EstimatorSpec> default_expt3_variants(double y0) {
  return {
      {EstimatorKind::lln, GainSchedule::constant(), 0.0},
      {EstimatorKind::lln, GainSchedule::logarithmic(), 0.0},
      {EstimatorKind::lln, GainSchedule::poly(0.75), 0.0},
      {EstimatorKind::sa, GainSchedule::power(0.5), y0},
      {EstimatorKind::sa, GainSchedule::power(0.75), y0},
      {EstimatorKind::sa, GainSchedule::power(1.0), y0},
  };
}

TrajectoryBundle expt3_schedule_sweep(const ExperimentConfig& config) {
  double y0 = 0.0;
  for (const auto& s : config.estimators)
    if (s.kind == EstimatorKind::sa) y0 = s.y0;
  return expt3_schedule_sweep(config, default_expt3_variants(y0));
}

TrajectoryBundle expt3_schedule_sweep(const ExperimentConfig& config,
                                      const std::vector<EstimatorSpec>& variants) {
  return single_page_sweep(config, variants, /*variant_labels=*/true);
}

double Expt2Result::mean_achieved(std::size_t est_idx, std::size_t k_idx) const {
  const auto& v = f_achieved[est_idx][k_idx];
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double Expt2Result::mean_benchmark() const {
  return std::accumulate(f_benchmark.begin(), f_benchmark.end(), 0.0) /
         static_cast<double>(f_benchmark.size());
}

double Expt2Result::mean_uniform() const {
  return std::accumulate(f_uniform.begin(), f_uniform.end(), 0.0) /
         static_cast<double>(f_uniform.size());
}

Expt2Result expt2_freshness(const ExperimentConfig& config) {
  config.validate();
  if (!(config.budget > 0.0))
    throw std::invalid_argument("expt2_freshness: needs a positive budget");
  if (!config.recipe && config.pages.empty())
    throw std::invalid_argument("expt2_freshness: needs pages or a recipe");
  if (config.estimators.empty())
    throw std::invalid_argument("expt2_freshness: no estimators configured");

  const auto grid = config.record_grid();
  const int reps = config.replications;
  const std::size_t n_est = config.estimators.size();

  Expt2Result res;
  res.ks.push_back(0);
  res.ks.insert(res.ks.end(), grid.begin(), grid.end());
  for (const auto& s : config.estimators) res.estimators.push_back(s.label());
  require_unique_labels(res.estimators);
  res.f_achieved.assign(
      n_est, std::vector<std::vector<double>>(res.ks.size(),
                                              std::vector<double>(reps, 0.0)));
  res.f_benchmark.assign(reps, 0.0);
  res.f_uniform.assign(reps, 0.0);
  if (config.check_empirical_freshness) res.f_empirical.assign(reps, 0.0);

  const RandomSource root(config.master_seed);
  parallel_for(reps, config.threads, [&](int r) {
    auto rep = root.stream(static_cast<std::uint64_t>(r));

    std::vector<PageSpec> pages;
    if (config.recipe) {
      const auto& rc = *config.recipe;
      const double crawl_rate =
          rc.crawl_rate > 0.0 ? rc.crawl_rate
                              : config.budget / static_cast<double>(rc.count);
      auto delta_rng = rep.stream(0);
      pages.reserve(rc.count);
      for (std::size_t i = 0; i < rc.count; ++i) {
        double delta = delta_rng.uniform(rc.delta_low, rc.delta_high);
        while (!(delta > 0.0)) delta = delta_rng.uniform(rc.delta_low, rc.delta_high);
        pages.push_back({static_cast<int>(i), delta, rc.weight, crawl_rate});
      }
    } else {
      pages = config.pages;
    }

    const auto benchmark = optimize(pages, config.budget);
    res.f_benchmark[r] = benchmark.objective;
    res.f_uniform[r] = uniform_plan(pages, config.budget).objective;

    // estimates[e][ki][page]; ki = 0 holds the initial estimates
    std::vector<std::vector<std::vector<double>>> est(
        n_est, std::vector<std::vector<double>>(
                   res.ks.size(), std::vector<double>(pages.size(), 0.0)));
    for (std::size_t i = 0; i < pages.size(); ++i) {
      auto change_rng = rep.stream(1 + 2 * i);
      auto crawl_rng = rep.stream(2 + 2 * i);
      const auto timeline = simulate_observation_window(
          pages[i], static_cast<std::size_t>(config.observations), change_rng,
          crawl_rng);
      const auto obs = derive_observations(timeline);
      for (std::size_t e = 0; e < n_est; ++e) {
        const auto& spec = config.estimators[e];
        est[e][0][i] = initial_estimate(spec, config.clip);
        const auto traj = run_stream(spec.kind, obs, pages[i].crawl_rate,
                                     spec.schedule, spec.y0, grid, config.clip);
        for (std::size_t g = 0; g < grid.size(); ++g)
          est[e][g + 1][i] = traj[g].estimate;
      }
    }

    for (std::size_t e = 0; e < n_est; ++e) {
      std::vector<PageSpec> believed = pages;
      for (std::size_t ki = 0; ki < res.ks.size(); ++ki) {
        for (std::size_t i = 0; i < pages.size(); ++i)
          believed[i].delta = std::max(est[e][ki][i], config.clip.min);
        const auto plan = optimize(believed, config.budget);
        // achieved freshness: the believed plan evaluated under the truth
        res.f_achieved[e][ki][r] = objective(plan.rates, pages);
      }
    }

    if (config.check_empirical_freshness) {
      // sweep-based cross-check of the benchmark plan's closed-form value
      double acc = 0.0;
      for (std::size_t i = 0; i < pages.size(); ++i) {
        auto change_rng = rep.stream(1 + 2 * pages.size() + 2 * i);
        auto crawl_rng = rep.stream(2 + 2 * pages.size() + 2 * i);
        EventTimeline tl;
        tl.horizon = config.horizon;
        tl.change_times =
            sample_poisson_process(pages[i].delta, config.horizon, change_rng);
        if (benchmark.rates[i] > 0.0)
          tl.crawl_times = sample_poisson_process(benchmark.rates[i],
                                                  config.horizon, crawl_rng);
        acc += pages[i].weight * empirical_freshness(tl);
      }
      res.f_empirical[r] = acc;
    }
  });
  return res;
}

double rate_slope(const TrajectoryBundle& bundle, std::string_view label,
                  double truth, std::int64_t k_min, std::int64_t k_max) {
  const std::size_t li = bundle.label_index(label);
  std::vector<double> xs, ys;
  for (std::size_t ki = 0; ki < bundle.ks.size(); ++ki) {
    const std::int64_t k = bundle.ks[ki];
    if (k < k_min || k > k_max) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(bundle.mean_abs_error(li, ki, truth));
  }
  if (xs.size() < 2)
    throw std::invalid_argument("rate_slope: need at least two recorded steps in range");
  if (*std::max_element(ys.begin(), ys.end()) == 0.0) return 0.0;
  for (double& y : ys) {
    if (y <= 0.0)
      throw std::invalid_argument("rate_slope: zero error at a recorded step");
    y = std::log(y);
  }
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

}  // namespace crawlfresh

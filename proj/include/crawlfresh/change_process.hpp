#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "crawlfresh/random_source.hpp"

namespace crawlfresh {

/// One page of the cache: true change rate, importance weight, crawl rate.
struct PageSpec {
  int id = 0;
  double delta = 1.0;       // change events per unit time, > 0
  double weight = 1.0;      // importance, >= 0
  double crawl_rate = 1.0;  // crawl events per unit time, > 0

  void validate() const;
};

/// Ground-truth change times and crawl times on (0, horizon].
/// The crawl at t0 = 0 is implicit and not stored.
struct EventTimeline {
  std::vector<double> change_times;
  std::vector<double> crawl_times;
  double horizon = 0.0;

  void validate() const;
};

/// What the crawler sees at crawl k: the gap since the previous crawl and
/// whether the page changed at least once inside it.
struct ObservationRecord {
  double tau = 0.0;         // t_k - t_{k-1}
  int changed = 0;          // indicator, 0 or 1
  double crawl_time = 0.0;  // t_k
};

/// Homogeneous Poisson event times on (0, horizon], strictly increasing.
/// horizon == 0 yields an empty list; negative horizon or rate <= 0 throw.
std::vector<double> sample_poisson_process(double rate, double horizon,
                                           RandomSource& rng);

/// Exactly `count` crawl times (cumulative iid exponential gaps).
std::vector<double> sample_crawl_times(double rate, std::size_t count,
                                       RandomSource& rng);

/// Timeline over a fixed horizon: changes and crawls sampled independently.
EventTimeline simulate_timeline(const PageSpec& page, double horizon,
                                RandomSource& change_rng, RandomSource& crawl_rng);

/// Timeline with exactly `num_crawls` crawls; the horizon is the last crawl
/// time, and change times are sampled on (0, horizon].
EventTimeline simulate_observation_window(const PageSpec& page,
                                          std::size_t num_crawls,
                                          RandomSource& change_rng,
                                          RandomSource& crawl_rng);

/// One record per crawl: changed = 1 iff some change time lies in
/// (t_{k-1}, t_k], with the implicit t_0 = 0.
std::vector<ObservationRecord> derive_observations(const EventTimeline& timeline);

/// Fraction of [0, horizon] during which the local copy matches the page.
/// The copy is synchronized at t = 0; a change makes it stale until the next
/// crawl. Exact event sweep, no discretization.
double empirical_freshness(const EventTimeline& timeline);

}  // namespace crawlfresh

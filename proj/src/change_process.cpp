#include "crawlfresh/change_process.hpp"

#include <cmath>
#include <stdexcept>

namespace crawlfresh {

void PageSpec::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("PageSpec: delta must be finite and > 0");
  if (!(crawl_rate > 0.0) || !std::isfinite(crawl_rate))
    throw std::invalid_argument("PageSpec: crawl_rate must be finite and > 0");
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw std::invalid_argument("PageSpec: weight must be finite and >= 0");
}

namespace {

void check_increasing(const std::vector<double>& times, double horizon,
                      const char* what) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev))
      throw std::invalid_argument(std::string(what) + ": times must be strictly increasing and > 0");
    if (t > horizon)
      throw std::invalid_argument(std::string(what) + ": time beyond horizon");
    prev = t;
  }
}

}  // namespace

void EventTimeline::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("EventTimeline: horizon must be finite and > 0");
  check_increasing(change_times, horizon, "change_times");
  check_increasing(crawl_times, horizon, "crawl_times");
}

std::vector<double> sample_poisson_process(double rate, double horizon,
                                           RandomSource& rng) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("sample_poisson_process: rate must be > 0");
  if (horizon < 0.0 || !std::isfinite(horizon))
    throw std::invalid_argument("sample_poisson_process: horizon must be >= 0");

  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(rate * horizon * 1.1) + 16);
  double t = rng.exponential(rate);
  while (t <= horizon) {
    times.push_back(t);
    t += rng.exponential(rate);
  }
  return times;
}

std::vector<double> sample_crawl_times(double rate, std::size_t count,
                                       RandomSource& rng) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("sample_crawl_times: rate must be > 0");
  std::vector<double> times(count);
  double t = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    t += rng.exponential(rate);
    times[k] = t;
  }
  return times;
}

EventTimeline simulate_timeline(const PageSpec& page, double horizon,
                                RandomSource& change_rng, RandomSource& crawl_rng) {
  page.validate();
  EventTimeline tl;
  tl.horizon = horizon;
  tl.change_times = sample_poisson_process(page.delta, horizon, change_rng);
  tl.crawl_times = sample_poisson_process(page.crawl_rate, horizon, crawl_rng);
  return tl;
}

EventTimeline simulate_observation_window(const PageSpec& page,
                                          std::size_t num_crawls,
                                          RandomSource& change_rng,
                                          RandomSource& crawl_rng) {
  page.validate();
  if (num_crawls == 0)
    throw std::invalid_argument("simulate_observation_window: need at least one crawl");
  EventTimeline tl;
  tl.crawl_times = sample_crawl_times(page.crawl_rate, num_crawls, crawl_rng);
  tl.horizon = tl.crawl_times.back();
  tl.change_times = sample_poisson_process(page.delta, tl.horizon, change_rng);
  return tl;
}

std::vector<ObservationRecord> derive_observations(const EventTimeline& timeline) {
  timeline.validate();
  std::vector<ObservationRecord> out;
  out.reserve(timeline.crawl_times.size());
  const auto& ch = timeline.change_times;
  std::size_t ci = 0;
  double prev = 0.0;
  for (double tk : timeline.crawl_times) {
    const std::size_t first = ci;
    while (ci < ch.size() && ch[ci] <= tk) ++ci;
    out.push_back({tk - prev, ci > first ? 1 : 0, tk});
    prev = tk;
  }
  return out;
}

double empirical_freshness(const EventTimeline& timeline) {
  timeline.validate();
  const auto& ch = timeline.change_times;
  const auto& cr = timeline.crawl_times;

  double fresh_len = 0.0;
  double seg_start = 0.0;
  bool fresh = true;
  std::size_t i = 0, j = 0;
  while (i < ch.size() || j < cr.size()) {
    // On a tie the change is processed first: a change at exactly t_k is
    // inside (t_{k-1}, t_k] and gets picked up by that crawl.
    const bool take_change =
        i < ch.size() && (j >= cr.size() || ch[i] <= cr[j]);
    if (take_change) {
      if (fresh) {
        fresh_len += ch[i] - seg_start;
        fresh = false;
      }
      ++i;
    } else {
      if (!fresh) {
        fresh = true;
        seg_start = cr[j];
      }
      ++j;
    }
  }
  if (fresh) fresh_len += timeline.horizon - seg_start;
  return fresh_len / timeline.horizon;
}

}  // namespace crawlfresh

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crawlfresh/change_process.hpp"

namespace crawlfresh {

enum class EstimatorKind { lln, sa, naive, mle, mm };

std::string_view to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(std::string_view name);

/// Gain sequence driving the LLN (alpha_k) and SA (eta_k) updates.
///
///   constant      1
///   logarithmic   max(log k, 1e-3)        (floor keeps alpha_1 > 0)
///   square_root   sqrt(k)
///   power         (k+1)^-exponent         (SA stepsizes)
///   poly          k^exponent              (LLN growth schedules, e.g. k^0.75)
struct GainSchedule {
  enum class Kind { constant, logarithmic, square_root, power, poly };

  Kind kind = Kind::constant;
  double exponent = 0.75;

  double at(std::int64_t k) const;

  /// Consistency conditions for LLN: alpha_k/k -> 0 and log(k/alpha_k)/k -> 0.
  bool lln_admissible() const;
  /// Consistency conditions for SA: sum eta_k = inf and sum eta_k^2 < inf.
  bool sa_admissible() const;

  /// Stable display token, safe for CSV fields (no commas).
  std::string label() const;

  static GainSchedule constant() { return {Kind::constant, 0.0}; }
  static GainSchedule logarithmic() { return {Kind::logarithmic, 0.0}; }
  static GainSchedule square_root() { return {Kind::square_root, 0.0}; }
  static GainSchedule power(double gamma) { return {Kind::power, gamma}; }
  static GainSchedule poly(double gamma) { return {Kind::poly, gamma}; }
};

constexpr double kLogScheduleFloor = 1e-3;

/// Clipping range for the offline estimators' degenerate streams.
struct ClipRange {
  double min = 1e-6;
  double max = 1e6;

  void validate() const;
};

/// Running state shared by the streaming estimators.
struct EstimatorState {
  std::int64_t step = 0;          // k, observations consumed
  std::int64_t change_count = 0;  // \hat I_k = sum of indicators
  double estimate = 0.0;
  double crawl_rate = 1.0;        // p_i, known to the crawler

  static EstimatorState init(double crawl_rate, double y0 = 0.0);
};

/// x_k = p * Ihat_k / (k + alpha_k - Ihat_k). The alpha_k term keeps the
/// denominator >= alpha_k > 0 even on an all-ones history.
EstimatorState lln_update(EstimatorState state, int indicator,
                          const GainSchedule& alpha);

/// y_{k+1} = y_k + eta_k * (I_{k+1} (y_k + p) - y_k), eta_k evaluated at the
/// pre-update step count (k >= 0). Nonnegative whenever y0 >= 0.
EstimatorState sa_update(EstimatorState state, int indicator,
                         const GainSchedule& eta);

/// z_k = p * Ihat_k / k, the detected-change frequency scaled by p.
/// Converges to p*delta/(delta+p), not delta; kept as a baseline.
EstimatorState naive_update(EstimatorState state, int indicator);

/// Maximum-likelihood rate estimate: the root of
///   sum_j I_j tau_j / (exp(delta tau_j) - 1) = sum_j (1 - I_j) tau_j.
/// All-zero histories return clip.min, all-ones clip.max.
double mle_estimate(std::span<const ObservationRecord> observations,
                    ClipRange clip = {});

/// Moment-matching rate estimate: the root of
///   sum_j exp(-delta tau_j) = sum_j (1 - I_j).
/// Degenerate histories clip like mle_estimate.
double mm_estimate(std::span<const ObservationRecord> observations,
                   ClipRange clip = {});

struct TrajectoryPoint {
  std::int64_t k = 0;
  double estimate = 0.0;
};

/// Recorded steps: multiples of `every` up to `total`, plus `total` itself.
std::vector<std::int64_t> arithmetic_grid(std::int64_t total, std::int64_t every);

/// Recorded steps: log-spaced with about `per_decade` points per decade,
/// starting at 1, always including `total`.
std::vector<std::int64_t> log_grid(std::int64_t total, int per_decade = 24);

/// Runs one estimator over an observation stream, reporting the estimate at
/// the recorded steps. Streaming kinds fold their update; mle/mm re-solve on
/// the prefix at each recorded step (warm-started from the previous root,
/// which does not change the returned value). `record_at` must be strictly
/// increasing, entries in [1, observations.size()].
std::vector<TrajectoryPoint> run_stream(
    EstimatorKind kind, std::span<const ObservationRecord> observations,
    double crawl_rate, const std::optional<GainSchedule>& schedule,
    double y0, std::span<const std::int64_t> record_at, ClipRange clip = {});

/// Convenience overload: records every `record_every` steps plus the final one.
std::vector<TrajectoryPoint> run_stream(
    EstimatorKind kind, std::span<const ObservationRecord> observations,
    double crawl_rate, const std::optional<GainSchedule>& schedule,
    double y0, std::int64_t record_every, ClipRange clip = {});

}  // namespace crawlfresh

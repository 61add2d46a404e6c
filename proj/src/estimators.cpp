#include "crawlfresh/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>

namespace crawlfresh {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::lln: return "lln";
    case EstimatorKind::sa: return "sa";
    case EstimatorKind::naive: return "naive";
    case EstimatorKind::mle: return "mle";
    case EstimatorKind::mm: return "mm";
  }
  return "?";
}

EstimatorKind estimator_kind_from_string(std::string_view name) {
  if (name == "lln") return EstimatorKind::lln;
  if (name == "sa") return EstimatorKind::sa;
  if (name == "naive") return EstimatorKind::naive;
  if (name == "mle") return EstimatorKind::mle;
  if (name == "mm") return EstimatorKind::mm;
  throw std::invalid_argument("unknown estimator kind: " + std::string(name));
}

double GainSchedule::at(std::int64_t k) const {
  const double kd = static_cast<double>(k);
  switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::logarithmic: return std::max(std::log(kd), kLogScheduleFloor);
    case Kind::square_root: return std::sqrt(kd);
    case Kind::power: return std::pow(kd + 1.0, -exponent);
    case Kind::poly: return std::pow(kd, exponent);
  }
  return 0.0;
}

bool GainSchedule::lln_admissible() const {
  switch (kind) {
    case Kind::constant:
    case Kind::logarithmic:
    case Kind::square_root: return true;
    case Kind::power: return exponent > 0.0;
    case Kind::poly: return exponent > 0.0 && exponent < 1.0;
  }
  return false;
}

bool GainSchedule::sa_admissible() const {
  return kind == Kind::power && exponent > 0.5 && exponent <= 1.0;
}

namespace {

std::string fmt_exponent(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

}  // namespace

std::string GainSchedule::label() const {
  switch (kind) {
    case Kind::constant: return "1";
    case Kind::logarithmic: return "logk";
    case Kind::square_root: return "sqrtk";
    case Kind::power: return fmt_exponent("(k+1)^-%g", exponent);
    case Kind::poly: return fmt_exponent("k^%g", exponent);
  }
  return "?";
}

void ClipRange::validate() const {
  if (!(min > 0.0) || !(min < max) || !std::isfinite(max))
    throw std::invalid_argument("ClipRange: need 0 < min < max < inf");
}

EstimatorState EstimatorState::init(double crawl_rate, double y0) {
  if (!(crawl_rate > 0.0) || !std::isfinite(crawl_rate))
    throw std::invalid_argument("EstimatorState: crawl_rate must be > 0");
  if (!(y0 >= 0.0) || !std::isfinite(y0))
    throw std::invalid_argument("EstimatorState: initial value must be >= 0");
  EstimatorState s;
  s.crawl_rate = crawl_rate;
  s.estimate = y0;
  return s;
}

EstimatorState lln_update(EstimatorState state, int indicator,
                          const GainSchedule& alpha) {
  state.step += 1;
  state.change_count += indicator != 0;
  const double a = alpha.at(state.step);
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("lln_update: alpha_k must be > 0");
  const double k = static_cast<double>(state.step);
  const double ihat = static_cast<double>(state.change_count);
  state.estimate = state.crawl_rate * ihat / (k + a - ihat);
  return state;
}

EstimatorState sa_update(EstimatorState state, int indicator,
                         const GainSchedule& eta) {
  const double e = eta.at(state.step);  // eta_k at the pre-update step
  if (!(e > 0.0) || e > 1.0)
    throw std::invalid_argument("sa_update: eta_k must lie in (0, 1]");
  const double y = state.estimate;
  const double target = indicator != 0 ? y + state.crawl_rate : 0.0;
  state.estimate = y + e * (target - y);
  state.step += 1;
  state.change_count += indicator != 0;
  return state;
}

EstimatorState naive_update(EstimatorState state, int indicator) {
  state.step += 1;
  state.change_count += indicator != 0;
  state.estimate = state.crawl_rate * static_cast<double>(state.change_count) /
                   static_cast<double>(state.step);
  return state;
}

namespace {

// Safeguarded root solve for a strictly decreasing f on [lo, hi] with
// f(lo) > 0 > f(hi). Bisection narrows the bracket to 1e-3, then Newton
// polishes; any Newton step leaving the bracket falls back to bisection.
// Converged when |f(x)| <= f_tol.
double solve_decreasing(const std::function<double(double)>& f,
                        const std::function<double(double)>& df, double lo,
                        double hi, double f_tol,
                        std::optional<double> guess) {
  double x;
  if (guess && *guess > lo && *guess < hi) {
    x = *guess;
  } else {
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (std::abs(fm) <= f_tol) return mid;
      (fm > 0.0 ? lo : hi) = mid;
    }
    x = 0.5 * (lo + hi);
  }
  double fx = f(x);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fx) <= f_tol) return x;
    (fx > 0.0 ? lo : hi) = x;
    const double d = df(x);
    double cand = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(d) && d != 0.0) cand = x - fx / d;
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    if (cand == x) break;  // bracket exhausted at double precision
    x = cand;
    fx = f(x);
  }
  if (std::abs(fx) <= f_tol) return x;
  throw std::runtime_error("estimator root solve did not converge");
}

struct StreamSums {
  std::vector<double> change_taus;  // tau_j with I_j = 1
  double zero_tau_sum = 0.0;        // sum of (1 - I_j) tau_j
  double tau_sum = 0.0;
  std::size_t zeros = 0;
};

StreamSums summarize(std::span<const ObservationRecord> obs) {
  StreamSums s;
  for (const auto& o : obs) {
    if (!(o.tau > 0.0))
      throw std::invalid_argument("observation tau must be > 0");
    s.tau_sum += o.tau;
    if (o.changed != 0) {
      s.change_taus.push_back(o.tau);
    } else {
      s.zero_tau_sum += o.tau;
      s.zeros += 1;
    }
  }
  return s;
}

double mle_solve(const StreamSums& s, ClipRange clip,
                 std::optional<double> guess) {
  if (s.change_taus.empty()) return clip.min;  // no root exists
  if (s.zeros == 0) return clip.max;           // root at infinity

  // term tau/(e^{d tau} - 1) written via exp(-d tau): stable for both
  // tiny and huge d*tau.
  const auto g = [&](double d) {
    double acc = 0.0;
    for (double t : s.change_taus) {
      const double q = std::exp(-d * t);
      acc += t * q / (-std::expm1(-d * t));
    }
    return acc - s.zero_tau_sum;
  };
  const auto dg = [&](double d) {
    double acc = 0.0;
    for (double t : s.change_taus) {
      const double q = std::exp(-d * t);
      const double den = -std::expm1(-d * t);
      acc -= t * t * q / (den * den);
    }
    return acc;
  };
  const double f_tol = 1e-9 * s.tau_sum;
  if (g(clip.min) <= 0.0) return clip.min;
  if (g(clip.max) >= 0.0) return clip.max;
  return solve_decreasing(g, dg, clip.min, clip.max, f_tol, guess);
}

double mm_solve(std::span<const ObservationRecord> obs, const StreamSums& s,
                ClipRange clip, std::optional<double> guess) {
  if (s.zeros == 0) return clip.max;
  if (s.zeros == obs.size()) return clip.min;  // root at 0, clipped up

  const double zero_count = static_cast<double>(s.zeros);
  const auto m = [&](double d) {
    double acc = 0.0;
    for (const auto& o : obs) acc += std::exp(-d * o.tau);
    return acc - zero_count;
  };
  const auto dm = [&](double d) {
    double acc = 0.0;
    for (const auto& o : obs) acc -= o.tau * std::exp(-d * o.tau);
    return acc;
  };
  const double f_tol = 1e-9 * s.tau_sum;
  if (m(clip.min) <= 0.0) return clip.min;
  if (m(clip.max) >= 0.0) return clip.max;
  return solve_decreasing(m, dm, clip.min, clip.max, f_tol, guess);
}

}  // namespace

double mle_estimate(std::span<const ObservationRecord> observations,
                    ClipRange clip) {
  clip.validate();
  if (observations.empty())
    throw std::invalid_argument("mle_estimate: observations must be non-empty");
  return mle_solve(summarize(observations), clip, std::nullopt);
}

double mm_estimate(std::span<const ObservationRecord> observations,
                   ClipRange clip) {
  clip.validate();
  if (observations.empty())
    throw std::invalid_argument("mm_estimate: observations must be non-empty");
  return mm_solve(observations, summarize(observations), clip, std::nullopt);
}

std::vector<std::int64_t> arithmetic_grid(std::int64_t total,
                                          std::int64_t every) {
  if (total < 1 || every < 1)
    throw std::invalid_argument("arithmetic_grid: total and every must be >= 1");
  std::vector<std::int64_t> ks;
  for (std::int64_t k = every; k <= total; k += every) ks.push_back(k);
  if (ks.empty() || ks.back() != total) ks.push_back(total);
  return ks;
}

std::vector<std::int64_t> log_grid(std::int64_t total, int per_decade) {
  if (total < 1 || per_decade < 1)
    throw std::invalid_argument("log_grid: total and per_decade must be >= 1");
  std::vector<std::int64_t> ks;
  const double ratio = std::pow(10.0, 1.0 / per_decade);
  double x = 1.0;
  while (true) {
    const auto k = static_cast<std::int64_t>(std::llround(x));
    if (k >= total) break;
    if (ks.empty() || k > ks.back()) ks.push_back(k);
    x *= ratio;
  }
  ks.push_back(total);
  return ks;
}

std::vector<TrajectoryPoint> run_stream(
    EstimatorKind kind, std::span<const ObservationRecord> observations,
    double crawl_rate, const std::optional<GainSchedule>& schedule, double y0,
    std::span<const std::int64_t> record_at, ClipRange clip) {
  if (observations.empty())
    throw std::invalid_argument("run_stream: observations must be non-empty");
  const auto n = static_cast<std::int64_t>(observations.size());
  std::int64_t prev = 0;
  for (std::int64_t k : record_at) {
    if (k <= prev || k > n)
      throw std::invalid_argument(
          "run_stream: record steps must be strictly increasing, in [1, n]");
    prev = k;
  }

  const bool streaming = kind == EstimatorKind::lln ||
                         kind == EstimatorKind::sa ||
                         kind == EstimatorKind::naive;
  const bool needs_schedule =
      kind == EstimatorKind::lln || kind == EstimatorKind::sa;
  if (needs_schedule && !schedule)
    throw std::invalid_argument("run_stream: lln/sa require a gain schedule");
  if (!needs_schedule && schedule)
    throw std::invalid_argument("run_stream: only lln/sa take a gain schedule");

  std::vector<TrajectoryPoint> out;
  out.reserve(record_at.size());

  if (streaming) {
    EstimatorState state = EstimatorState::init(crawl_rate, y0);
    std::size_t next = 0;
    for (std::int64_t k = 1; k <= n && next < record_at.size(); ++k) {
      const int ind = observations[static_cast<std::size_t>(k - 1)].changed;
      switch (kind) {
        case EstimatorKind::lln: state = lln_update(state, ind, *schedule); break;
        case EstimatorKind::sa: state = sa_update(state, ind, *schedule); break;
        default: state = naive_update(state, ind); break;
      }
      if (k == record_at[next]) {
        out.push_back({k, state.estimate});
        ++next;
      }
    }
    return out;
  }

  clip.validate();
  std::optional<double> warm;
  StreamSums sums;
  std::size_t consumed = 0;
  for (std::int64_t k : record_at) {
    // extend the running sums to the k-th prefix
    for (; consumed < static_cast<std::size_t>(k); ++consumed) {
      const auto& o = observations[consumed];
      if (!(o.tau > 0.0))
        throw std::invalid_argument("observation tau must be > 0");
      sums.tau_sum += o.tau;
      if (o.changed != 0) {
        sums.change_taus.push_back(o.tau);
      } else {
        sums.zero_tau_sum += o.tau;
        sums.zeros += 1;
      }
    }
    const auto prefix = observations.first(static_cast<std::size_t>(k));
    const double est = kind == EstimatorKind::mle
                           ? mle_solve(sums, clip, warm)
                           : mm_solve(prefix, sums, clip, warm);
    warm = est;
    out.push_back({k, est});
  }
  return out;
}

std::vector<TrajectoryPoint> run_stream(
    EstimatorKind kind, std::span<const ObservationRecord> observations,
    double crawl_rate, const std::optional<GainSchedule>& schedule, double y0,
    std::int64_t record_every, ClipRange clip) {
  const auto grid = arithmetic_grid(
      static_cast<std::int64_t>(observations.size()), record_every);
  return run_stream(kind, observations, crawl_rate, schedule, y0, grid, clip);
}

}  // namespace crawlfresh

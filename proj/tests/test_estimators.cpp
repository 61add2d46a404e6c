#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "crawlfresh/change_process.hpp"
#include "crawlfresh/estimators.hpp"

using namespace crawlfresh;

namespace {

std::vector<ObservationRecord> simulate_obs(double delta, double p,
                                            std::size_t k, std::uint64_t seed) {
  const RandomSource root(seed);
  auto change_rng = root.stream(0);
  auto crawl_rng = root.stream(1);
  const auto tl =
      simulate_observation_window({0, delta, 1.0, p}, k, change_rng, crawl_rng);
  return derive_observations(tl);
}

std::vector<ObservationRecord> from_indicators(const std::vector<int>& inds,
                                               double tau = 1.0) {
  std::vector<ObservationRecord> obs;
  double t = 0.0;
  for (int i : inds) {
    t += tau;
    obs.push_back({tau, i, t});
  }
  return obs;
}

double mle_residual(std::span<const ObservationRecord> obs, double delta) {
  double lhs = 0.0, rhs = 0.0;
  for (const auto& o : obs) {
    if (o.changed)
      lhs += o.tau / std::expm1(delta * o.tau);
    else
      rhs += o.tau;
  }
  return lhs - rhs;
}

double mm_residual(std::span<const ObservationRecord> obs, double delta) {
  double lhs = 0.0, zeros = 0.0;
  for (const auto& o : obs) {
    lhs += std::exp(-delta * o.tau);
    zeros += o.changed ? 0.0 : 1.0;
  }
  return lhs - zeros;
}

double tau_sum(std::span<const ObservationRecord> obs) {
  double s = 0.0;
  for (const auto& o : obs) s += o.tau;
  return s;
}

}  // namespace

TEST_CASE("gain schedule values and admissibility") {
  CHECK(GainSchedule::constant().at(1) == 1.0);
  CHECK(GainSchedule::constant().at(12345) == 1.0);
  CHECK(GainSchedule::logarithmic().at(1) == kLogScheduleFloor);  // log 1 = 0
  CHECK(GainSchedule::logarithmic().at(100) == doctest::Approx(std::log(100.0)));
  CHECK(GainSchedule::square_root().at(16) == doctest::Approx(4.0));
  CHECK(GainSchedule::power(0.75).at(0) == 1.0);
  CHECK(GainSchedule::power(0.75).at(99) == doctest::Approx(std::pow(100.0, -0.75)));
  CHECK(GainSchedule::poly(0.75).at(16) == doctest::Approx(8.0));

  CHECK(GainSchedule::constant().lln_admissible());
  CHECK(GainSchedule::logarithmic().lln_admissible());
  CHECK(GainSchedule::square_root().lln_admissible());
  CHECK(GainSchedule::poly(0.75).lln_admissible());
  CHECK_FALSE(GainSchedule::poly(1.5).lln_admissible());

  CHECK(GainSchedule::power(0.75).sa_admissible());
  CHECK(GainSchedule::power(1.0).sa_admissible());
  CHECK_FALSE(GainSchedule::power(0.5).sa_admissible());  // sum eta^2 diverges
  CHECK_FALSE(GainSchedule::constant().sa_admissible());
  CHECK_FALSE(GainSchedule::square_root().sa_admissible());

  CHECK(GainSchedule::constant().label() == "1");
  CHECK(GainSchedule::poly(0.75).label() == "k^0.75");
  CHECK(GainSchedule::power(0.75).label() == "(k+1)^-0.75");
}

TEST_CASE("lln update examples") {
  auto s = EstimatorState::init(3.0);
  const auto alpha = GainSchedule::constant();
  // k=4, Ihat=2 via stream 1,1,0,0
  s = lln_update(s, 1, alpha);
  s = lln_update(s, 1, alpha);
  s = lln_update(s, 0, alpha);
  s = lln_update(s, 0, alpha);
  CHECK(s.step == 4);
  CHECK(s.change_count == 2);
  CHECK(s.estimate == doctest::Approx(2.0));  // 3*2/(4+1-2)

  SUBCASE("all zeros stay at zero") {
    auto z = EstimatorState::init(3.0);
    for (int k = 0; k < 50; ++k) {
      z = lln_update(z, 0, alpha);
      CHECK(z.estimate == 0.0);
    }
  }
  SUBCASE("all ones stay finite: denominator equals alpha") {
    auto o = EstimatorState::init(3.0);
    for (int k = 0; k < 10; ++k) o = lln_update(o, 1, alpha);
    CHECK(o.estimate == doctest::Approx(30.0));  // 3*10/(10+1-10)
  }
}

TEST_CASE("lln stability invariant: denominator >= alpha_k > 0, estimate finite") {
  RandomSource rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const double mu = rng.uniform();
    const GainSchedule alpha = trial % 4 == 0   ? GainSchedule::constant()
                               : trial % 4 == 1 ? GainSchedule::logarithmic()
                               : trial % 4 == 2 ? GainSchedule::square_root()
                                                : GainSchedule::poly(0.6);
    auto s = EstimatorState::init(2.5);
    for (int k = 1; k <= 500; ++k) {
      s = lln_update(s, rng.uniform() < mu ? 1 : 0, alpha);
      const double a = alpha.at(s.step);
      const double denom = static_cast<double>(s.step) + a -
                           static_cast<double>(s.change_count);
      // one-ulp slack: (k + a) - Ihat can round just below a when Ihat = k
      CHECK(denom >= a - 1e-12 * static_cast<double>(s.step));
      CHECK(denom > 0.0);
      CHECK(std::isfinite(s.estimate));
      CHECK(s.estimate >= 0.0);
      CHECK(s.change_count <= s.step);
    }
  }
}

TEST_CASE("sa update examples") {
  // eta = 0.5 comes from the power(1) schedule at step 1: (1+1)^-1
  auto s = EstimatorState::init(3.0, 2.0);
  s.step = 1;  // so eta = (1+1)^-1 = 0.5
  auto up = sa_update(s, 1, GainSchedule::power(1.0));
  CHECK(up.estimate == doctest::Approx(3.5));  // 2 + 0.5*(5-2)
  up = sa_update(s, 0, GainSchedule::power(1.0));
  CHECK(up.estimate == doctest::Approx(1.0));  // pure decay branch

  SUBCASE("y0 = 0 and all-zero stream stays at 0") {
    auto z = EstimatorState::init(3.0, 0.0);
    for (int k = 0; k < 100; ++k) {
      z = sa_update(z, 0, GainSchedule::power(0.75));
      CHECK(z.estimate == 0.0);
    }
  }
  SUBCASE("eta outside (0,1] rejected") {
    auto z = EstimatorState::init(3.0, 0.0);
    z.step = 4;  // sqrt(4) = 2 > 1
    CHECK_THROWS_AS(sa_update(z, 1, GainSchedule::square_root()),
                    std::invalid_argument);
  }
}

TEST_CASE("sa positivity invariant") {
  RandomSource rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const double mu = rng.uniform();
    const double y0 = rng.uniform(0.0, 4.0);
    auto s = EstimatorState::init(1.7, y0);
    const auto eta = GainSchedule::power(rng.uniform(0.55, 1.0));
    for (int k = 0; k < 400; ++k) {
      s = sa_update(s, rng.uniform() < mu ? 1 : 0, eta);
      CHECK(s.estimate >= 0.0);
      CHECK(std::isfinite(s.estimate));
    }
  }
}

TEST_CASE("naive update examples and bound") {
  auto s = EstimatorState::init(3.0);
  s = naive_update(s, 1);
  s = naive_update(s, 1);
  s = naive_update(s, 0);
  s = naive_update(s, 0);
  CHECK(s.estimate == doctest::Approx(1.5));  // 3*2/4

  SUBCASE("all ones attain p exactly") {
    auto o = EstimatorState::init(3.0);
    for (int k = 0; k < 25; ++k) {
      o = naive_update(o, 1);
      CHECK(o.estimate == 3.0);
    }
  }
  SUBCASE("z_k always in [0, p]") {
    RandomSource rng(3);
    auto z = EstimatorState::init(2.0);
    for (int k = 0; k < 300; ++k) {
      z = naive_update(z, rng.uniform() < 0.4 ? 1 : 0);
      CHECK(z.estimate >= 0.0);
      CHECK(z.estimate <= 2.0);
    }
  }
}

TEST_CASE("naive limit is p*delta/(delta+p), not delta") {
  const auto obs = simulate_obs(5.0, 3.0, 100000, 404);
  auto s = EstimatorState::init(3.0);
  for (const auto& o : obs) s = naive_update(s, o.changed);
  CHECK(std::abs(s.estimate - 1.875) < 0.05);
  CHECK(std::abs(s.estimate - 5.0) > 2.0);
}

TEST_CASE("lln consistency: median error shrinks toward zero") {
  const int seeds = 200;
  std::vector<double> err_1e2, err_1e3, err_1e4;
  for (int s = 0; s < seeds; ++s) {
    const auto obs = simulate_obs(5.0, 3.0, 10000, 5000 + s);
    auto st = EstimatorState::init(3.0);
    const auto alpha = GainSchedule::constant();
    for (std::size_t k = 1; k <= obs.size(); ++k) {
      st = lln_update(st, obs[k - 1].changed, alpha);
      if (k == 100) err_1e2.push_back(std::abs(st.estimate - 5.0));
      if (k == 1000) err_1e3.push_back(std::abs(st.estimate - 5.0));
      if (k == 10000) err_1e4.push_back(std::abs(st.estimate - 5.0));
    }
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double m2 = median(err_1e2), m3 = median(err_1e3), m4 = median(err_1e4);
  CHECK(m3 < m2);
  CHECK(m4 < m3);
  CHECK(m4 < 0.15);
}

TEST_CASE("mle degenerate streams clip") {
  const ClipRange clip;
  CHECK(mle_estimate(from_indicators({0, 0, 0, 0}), clip) == clip.min);
  CHECK(mle_estimate(from_indicators({1, 1, 1, 1}), clip) == clip.max);
  CHECK_THROWS_AS(mle_estimate({}, clip), std::invalid_argument);
}

TEST_CASE("mm degenerate and analytic root") {
  const ClipRange clip;
  CHECK(mm_estimate(from_indicators({1}), clip) == clip.max);
  CHECK(mm_estimate(from_indicators({0, 0}), clip) == clip.min);

  // two records (tau=1, I=1), (tau=1, I=0): root solves 2 e^-d = 1
  const auto obs = from_indicators({1, 0});
  CHECK(mm_estimate(obs, clip) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("mle/mm consistency and residuals on a synthetic stream") {
  const auto obs = simulate_obs(5.0, 3.0, 10000, 909);
  const ClipRange clip;
  const double ts = tau_sum(obs);

  const double d_mle = mle_estimate(obs, clip);
  CHECK(std::abs(d_mle - 5.0) < 0.5);
  CHECK(std::abs(mle_residual(obs, d_mle)) <= 1e-9 * ts);

  const double d_mm = mm_estimate(obs, clip);
  CHECK(std::abs(d_mm - 5.0) < 0.6);
  CHECK(std::abs(mm_residual(obs, d_mm)) <= 1e-9 * ts);
}

TEST_CASE("mle/mm residuals hold across random parameterizations") {
  RandomSource rng(606);
  for (int trial = 0; trial < 15; ++trial) {
    const double delta = rng.uniform(0.1, 10.0);
    const double p = rng.uniform(0.1, 10.0);
    const auto obs = simulate_obs(delta, p, 800, 7000 + trial);
    long ones = 0;
    for (const auto& o : obs) ones += o.changed;
    if (ones == 0 || ones == static_cast<long>(obs.size())) continue;
    const ClipRange clip;
    const double ts = tau_sum(obs);
    CHECK(std::abs(mle_residual(obs, mle_estimate(obs, clip))) <= 1e-9 * ts);
    CHECK(std::abs(mm_residual(obs, mm_estimate(obs, clip))) <= 1e-9 * ts);
  }
}

TEST_CASE("run_stream: fold consistency for streaming kinds") {
  const auto obs = simulate_obs(5.0, 3.0, 500, 1234);
  const auto alpha = GainSchedule::constant();

  const auto traj = run_stream(EstimatorKind::lln, obs, 3.0, alpha, 0.0,
                               std::int64_t{1});
  REQUIRE(traj.size() == obs.size());
  auto s = EstimatorState::init(3.0);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    s = lln_update(s, obs[k].changed, alpha);
    CHECK(traj[k].estimate == s.estimate);  // bit-exact fold
    CHECK(traj[k].k == static_cast<std::int64_t>(k + 1));
  }

  const auto sa_traj = run_stream(EstimatorKind::sa, obs, 3.0,
                                  GainSchedule::power(0.75), 0.0, std::int64_t{7});
  auto y = EstimatorState::init(3.0, 0.0);
  std::size_t idx = 0;
  for (std::size_t k = 1; k <= obs.size(); ++k) {
    y = sa_update(y, obs[k - 1].changed, GainSchedule::power(0.75));
    if (k % 7 == 0 || k == obs.size()) {
      CHECK(sa_traj[idx].estimate == y.estimate);
      ++idx;
    }
  }
  CHECK(idx == sa_traj.size());
}

TEST_CASE("run_stream: mle prefixes satisfy the residual bound, warm == cold") {
  const auto obs = simulate_obs(2.0, 1.0, 1000, 4321);
  const std::vector<std::int64_t> grid{10, 100, 1000};
  const auto traj =
      run_stream(EstimatorKind::mle, obs, 1.0, std::nullopt, 0.0, grid);
  REQUIRE(traj.size() == 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto prefix =
        std::span(obs).first(static_cast<std::size_t>(grid[i]));
    const double ts = tau_sum(prefix);
    CHECK(std::abs(mle_residual(prefix, traj[i].estimate)) <= 1e-9 * ts);
    const double cold = mle_estimate(prefix);
    CHECK(traj[i].estimate ==
          doctest::Approx(cold).epsilon(1e-9));  // warm start is cosmetic
  }
}

TEST_CASE("run_stream: sa converges for 95% of seeds") {
  // eta_k = (k+1)^-0.75, y0=0, delta=5, p=3, k=1e4 -> within 5 +- 1
  int hits = 0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    const auto obs = simulate_obs(5.0, 3.0, 10000, 31000 + s);
    const auto traj =
        run_stream(EstimatorKind::sa, obs, 3.0, GainSchedule::power(0.75), 0.0,
                   std::int64_t{10000});
    if (std::abs(traj.back().estimate - 5.0) <= 1.0) ++hits;
  }
  CHECK(hits >= 38);
}

TEST_CASE("run_stream: schedule requirements") {
  const auto obs = from_indicators({1, 0, 1});
  CHECK_THROWS_AS(run_stream(EstimatorKind::lln, obs, 3.0, std::nullopt, 0.0,
                             std::int64_t{1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_stream(EstimatorKind::naive, obs, 3.0,
                             GainSchedule::constant(), 0.0, std::int64_t{1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_stream(EstimatorKind::mle, obs, 3.0, std::nullopt, 0.0,
                             std::vector<std::int64_t>{5}),  // beyond n
                  std::invalid_argument);
}

TEST_CASE("estimator kind names round-trip") {
  for (auto kind : {EstimatorKind::lln, EstimatorKind::sa, EstimatorKind::naive,
                    EstimatorKind::mle, EstimatorKind::mm})
    CHECK(estimator_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(estimator_kind_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("recording grids") {
  CHECK(arithmetic_grid(10, 4) == std::vector<std::int64_t>{4, 8, 10});
  CHECK(arithmetic_grid(10, 5) == std::vector<std::int64_t>{5, 10});
  CHECK(arithmetic_grid(3, 10) == std::vector<std::int64_t>{3});
  const auto lg = log_grid(10000);
  CHECK(lg.front() == 1);
  CHECK(lg.back() == 10000);
  CHECK(std::is_sorted(lg.begin(), lg.end()));
  CHECK(std::adjacent_find(lg.begin(), lg.end()) == lg.end());
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crawlfresh/change_process.hpp"
#include "crawlfresh/estimators.hpp"
#include "crawlfresh/experiments.hpp"
#include "crawlfresh/freshness_opt.hpp"
#include "crawlfresh/random_source.hpp"
#include "crawlfresh/version.hpp"

namespace py = pybind11;
using namespace crawlfresh;

PYBIND11_MODULE(_crawlfresh, m) {
  m.doc() = "Online page-change-rate estimation and crawl-rate optimization";
  m.attr("__version__") = kVersion;

  py::class_<RandomSource>(m, "RandomSource")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("stream", &RandomSource::stream, py::arg("index"))
      .def("uniform", py::overload_cast<>(&RandomSource::uniform))
      .def("exponential", &RandomSource::exponential, py::arg("rate"))
      .def_property_readonly("seed", &RandomSource::seed);

  py::class_<PageSpec>(m, "PageSpec")
      .def(py::init([](int id, double delta, double weight, double crawl_rate) {
             PageSpec p{id, delta, weight, crawl_rate};
             p.validate();
             return p;
           }),
           py::arg("id") = 0, py::arg("delta") = 1.0, py::arg("weight") = 1.0,
           py::arg("crawl_rate") = 1.0)
      .def_readwrite("id", &PageSpec::id)
      .def_readwrite("delta", &PageSpec::delta)
      .def_readwrite("weight", &PageSpec::weight)
      .def_readwrite("crawl_rate", &PageSpec::crawl_rate);

  py::class_<EventTimeline>(m, "EventTimeline")
      .def(py::init([](std::vector<double> changes, std::vector<double> crawls,
                       double horizon) {
             EventTimeline tl{std::move(changes), std::move(crawls), horizon};
             tl.validate();
             return tl;
           }),
           py::arg("change_times"), py::arg("crawl_times"), py::arg("horizon"))
      .def_readonly("change_times", &EventTimeline::change_times)
      .def_readonly("crawl_times", &EventTimeline::crawl_times)
      .def_readonly("horizon", &EventTimeline::horizon);

  py::class_<ObservationRecord>(m, "ObservationRecord")
      .def(py::init([](double tau, int changed, double crawl_time) {
             return ObservationRecord{tau, changed, crawl_time};
           }),
           py::arg("tau"), py::arg("changed"), py::arg("crawl_time"))
      .def_readonly("tau", &ObservationRecord::tau)
      .def_readonly("changed", &ObservationRecord::changed)
      .def_readonly("crawl_time", &ObservationRecord::crawl_time);

  py::class_<GainSchedule> schedule(m, "GainSchedule");
  schedule.def("at", &GainSchedule::at, py::arg("k"))
      .def("lln_admissible", &GainSchedule::lln_admissible)
      .def("sa_admissible", &GainSchedule::sa_admissible)
      .def("label", &GainSchedule::label)
      .def_static("constant", &GainSchedule::constant)
      .def_static("logarithmic", &GainSchedule::logarithmic)
      .def_static("square_root", &GainSchedule::square_root)
      .def_static("power", &GainSchedule::power, py::arg("gamma"))
      .def_static("poly", &GainSchedule::poly, py::arg("gamma"));

  py::class_<ClipRange>(m, "ClipRange")
      .def(py::init([](double lo, double hi) {
             ClipRange c{lo, hi};
             c.validate();
             return c;
           }),
           py::arg("min") = 1e-6, py::arg("max") = 1e6)
      .def_readonly("min", &ClipRange::min)
      .def_readonly("max", &ClipRange::max);

  py::class_<EstimatorState>(m, "EstimatorState")
      .def_static("init", &EstimatorState::init, py::arg("crawl_rate"),
                  py::arg("y0") = 0.0)
      .def_readonly("step", &EstimatorState::step)
      .def_readonly("change_count", &EstimatorState::change_count)
      .def_readonly("estimate", &EstimatorState::estimate)
      .def_readonly("crawl_rate", &EstimatorState::crawl_rate);

  py::class_<CrawlPlan>(m, "CrawlPlan")
      .def_readonly("rates", &CrawlPlan::rates)
      .def_readonly("budget", &CrawlPlan::budget)
      .def_readonly("objective", &CrawlPlan::objective)
      .def_readonly("multiplier", &CrawlPlan::multiplier);

  m.def("sample_poisson_process", &sample_poisson_process, py::arg("rate"),
        py::arg("horizon"), py::arg("rng"));
  m.def("sample_crawl_times", &sample_crawl_times, py::arg("rate"),
        py::arg("count"), py::arg("rng"));
  m.def("simulate_timeline", &simulate_timeline, py::arg("page"),
        py::arg("horizon"), py::arg("change_rng"), py::arg("crawl_rng"));
  m.def("simulate_observation_window", &simulate_observation_window,
        py::arg("page"), py::arg("num_crawls"), py::arg("change_rng"),
        py::arg("crawl_rng"));
  m.def("derive_observations", &derive_observations, py::arg("timeline"));
  m.def("empirical_freshness", &empirical_freshness, py::arg("timeline"));

  m.def("lln_update", &lln_update, py::arg("state"), py::arg("indicator"),
        py::arg("alpha"));
  m.def("sa_update", &sa_update, py::arg("state"), py::arg("indicator"),
        py::arg("eta"));
  m.def("naive_update", &naive_update, py::arg("state"), py::arg("indicator"));
  m.def(
      "mle_estimate",
      [](const std::vector<ObservationRecord>& obs, ClipRange clip) {
        return mle_estimate(obs, clip);
      },
      py::arg("observations"), py::arg("clip") = ClipRange{});
  m.def(
      "mm_estimate",
      [](const std::vector<ObservationRecord>& obs, ClipRange clip) {
        return mm_estimate(obs, clip);
      },
      py::arg("observations"), py::arg("clip") = ClipRange{});

  m.def(
      "run_stream",
      [](const std::string& kind, const std::vector<ObservationRecord>& obs,
         double crawl_rate, const std::optional<GainSchedule>& schedule,
         double y0, const std::vector<std::int64_t>& record_at, ClipRange clip) {
        const auto traj = run_stream(estimator_kind_from_string(kind), obs,
                                     crawl_rate, schedule, y0, record_at, clip);
        std::vector<std::pair<std::int64_t, double>> out;
        out.reserve(traj.size());
        for (const auto& pt : traj) out.emplace_back(pt.k, pt.estimate);
        return out;
      },
      py::arg("kind"), py::arg("observations"), py::arg("crawl_rate"),
      py::arg("schedule") = std::nullopt, py::arg("y0") = 0.0,
      py::arg("record_at") = std::vector<std::int64_t>{},
      py::arg("clip") = ClipRange{});

  m.def(
      "objective",
      [](const std::vector<double>& rates, const std::vector<PageSpec>& pages) {
        return objective(rates, pages);
      },
      py::arg("rates"), py::arg("pages"));
  m.def(
      "optimize",
      [](const std::vector<PageSpec>& pages, double budget, double tol) {
        return optimize(pages, budget, tol);
      },
      py::arg("pages"), py::arg("budget"), py::arg("tol") = 1e-9);
  m.def(
      "uniform_plan",
      [](const std::vector<PageSpec>& pages, double budget) {
        return uniform_plan(pages, budget);
      },
      py::arg("pages"), py::arg("budget"));

  m.def("log_grid", &log_grid, py::arg("total"), py::arg("per_decade") = 24);
  m.def("arithmetic_grid", &arithmetic_grid, py::arg("total"), py::arg("every"));
}

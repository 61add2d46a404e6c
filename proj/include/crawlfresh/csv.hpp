#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "crawlfresh/experiments.hpp"

namespace crawlfresh {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

struct LabeledTrajectory {
  std::string estimator;
  std::uint64_t seed = 0;
  std::vector<TrajectoryPoint> points;
};

// All writers emit a header row, comma separators, '\n' line ends.
void write_timeline_csv(std::ostream& os, const EventTimeline& timeline);
void write_observations_csv(std::ostream& os,
                            std::span<const ObservationRecord> observations);
void write_trajectories_csv(std::ostream& os,
                            std::span<const LabeledTrajectory> trajectories);
void write_plan_csv(std::ostream& os, const CrawlPlan& plan,
                    std::span<const PageSpec> pages);
void write_objective_csv(std::ostream& os, double budget, double objective_value);
void write_expt1_csv(std::ostream& os, const TrajectoryBundle& bundle);
void write_expt2_csv(std::ostream& os, const Expt2Result& result);
void write_expt3_csv(std::ostream& os, const TrajectoryBundle& bundle,
                     double true_delta);

}  // namespace crawlfresh

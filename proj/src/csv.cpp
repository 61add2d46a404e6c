#include "crawlfresh/csv.hpp"

#include <cstdio>

namespace crawlfresh {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_timeline_csv(std::ostream& os, const EventTimeline& timeline) {
  os << "event_time,kind\n";
  const auto& ch = timeline.change_times;
  const auto& cr = timeline.crawl_times;
  std::size_t i = 0, j = 0;
  while (i < ch.size() || j < cr.size()) {
    const bool take_change = i < ch.size() && (j >= cr.size() || ch[i] <= cr[j]);
    if (take_change) {
      os << format_double(ch[i++]) << ",change\n";
    } else {
      os << format_double(cr[j++]) << ",crawl\n";
    }
  }
}

void write_observations_csv(std::ostream& os,
                            std::span<const ObservationRecord> observations) {
  os << "t_k,tau_k,I_k\n";
  for (const auto& o : observations)
    os << format_double(o.crawl_time) << ',' << format_double(o.tau) << ','
       << o.changed << '\n';
}

void write_trajectories_csv(std::ostream& os,
                            std::span<const LabeledTrajectory> trajectories) {
  os << "k,estimate,estimator,seed\n";
  for (const auto& tr : trajectories)
    for (const auto& pt : tr.points)
      os << pt.k << ',' << format_double(pt.estimate) << ',' << tr.estimator
         << ',' << tr.seed << '\n';
}

void write_plan_csv(std::ostream& os, const CrawlPlan& plan,
                    std::span<const PageSpec> pages) {
  os << "page_id,w,delta_used,p_opt\n";
  for (std::size_t i = 0; i < pages.size(); ++i)
    os << pages[i].id << ',' << format_double(pages[i].weight) << ','
       << format_double(pages[i].delta) << ',' << format_double(plan.rates[i])
       << '\n';
}

void write_objective_csv(std::ostream& os, double budget, double objective_value) {
  os << "B,F\n";
  os << format_double(budget) << ',' << format_double(objective_value) << '\n';
}

void write_expt1_csv(std::ostream& os, const TrajectoryBundle& bundle) {
  os << "k,estimator,mean,lo95,hi95\n";
  for (std::size_t ki = 0; ki < bundle.ks.size(); ++ki)
    for (std::size_t e = 0; e < bundle.labels.size(); ++e) {
      const auto row = bundle.summary(e, ki);
      os << row.k << ',' << bundle.labels[e] << ',' << format_double(row.mean)
         << ',' << format_double(row.lo95) << ',' << format_double(row.hi95)
         << '\n';
    }
}

void write_expt2_csv(std::ostream& os, const Expt2Result& result) {
  os << "k,estimator,F_achieved,F_benchmark,F_uniform\n";
  const double bench = result.mean_benchmark();
  const double uniform = result.mean_uniform();
  for (std::size_t ki = 0; ki < result.ks.size(); ++ki)
    for (std::size_t e = 0; e < result.estimators.size(); ++e)
      os << result.ks[ki] << ',' << result.estimators[e] << ','
         << format_double(result.mean_achieved(e, ki)) << ','
         << format_double(bench) << ',' << format_double(uniform) << '\n';
}

void write_expt3_csv(std::ostream& os, const TrajectoryBundle& bundle,
                     double true_delta) {
  os << "k,variant,mean_abs_error,lo95,hi95\n";
  for (std::size_t ki = 0; ki < bundle.ks.size(); ++ki)
    for (std::size_t e = 0; e < bundle.labels.size(); ++e) {
      const auto row = bundle.abs_error_summary(e, ki, true_delta);
      const double mae = bundle.mean_abs_error(e, ki, true_delta);
      os << row.k << ',' << bundle.labels[e] << ',' << format_double(mae) << ','
         << format_double(row.lo95) << ',' << format_double(row.hi95) << '\n';
    }
}

}  // namespace crawlfresh

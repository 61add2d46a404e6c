#pragma once

#include <span>
#include <vector>

#include "crawlfresh/change_process.hpp"

namespace crawlfresh {

/// Crawl-rate allocation with its objective value and budget.
struct CrawlPlan {
  std::vector<double> rates;
  double budget = 0.0;
  double objective = 0.0;
  double multiplier = 0.0;  // KKT multiplier behind the rates (0 if unused)
};

/// Stationary cache freshness F(p) = sum_i w_i p_i / (p_i + delta_i).
double objective(std::span<const double> rates, std::span<const PageSpec> pages);

/// Maximizes F(p) subject to sum p_i <= B, p >= 0.
///
/// The objective is smooth and concave, so the KKT conditions are exact:
/// p_i(lambda) = max(0, sqrt(w_i delta_i / lambda) - delta_i) with lambda
/// chosen by bisection until |sum_i p_i(lambda) - B| <= tol * max(B, 1).
/// The budget always binds when B > 0 and some weight is positive.
CrawlPlan optimize(std::span<const PageSpec> pages, double budget,
                   double tol = 1e-9);

/// Even split p_i = B / N.
CrawlPlan uniform_plan(std::span<const PageSpec> pages, double budget);

}  // namespace crawlfresh

#include "crawlfresh/freshness_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crawlfresh {

double objective(std::span<const double> rates, std::span<const PageSpec> pages) {
  if (rates.size() != pages.size())
    throw std::invalid_argument("objective: rates/pages length mismatch");
  double f = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    pages[i].validate();
    const double p = rates[i];
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("objective: rates must be finite and >= 0");
    if (p > 0.0) f += pages[i].weight * p / (p + pages[i].delta);
  }
  return f;
}

namespace {

double allocation(double lambda, const PageSpec& page) {
  const double wd = page.weight * page.delta;
  if (wd <= 0.0) return 0.0;
  return std::max(0.0, std::sqrt(wd / lambda) - page.delta);
}

double allocation_sum(double lambda, std::span<const PageSpec> pages) {
  double s = 0.0;
  for (const auto& pg : pages) s += allocation(lambda, pg);
  return s;
}

}  // namespace

CrawlPlan optimize(std::span<const PageSpec> pages, double budget, double tol) {
  if (pages.empty()) throw std::invalid_argument("optimize: no pages");
  if (budget < 0.0 || !std::isfinite(budget))
    throw std::invalid_argument("optimize: budget must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("optimize: tol must be > 0");
  for (const auto& pg : pages) pg.validate();

  CrawlPlan plan;
  plan.budget = budget;
  plan.rates.assign(pages.size(), 0.0);

  // lambda >= max w_i/delta_i zeroes every page; all-zero weights or B = 0
  // leave the all-zero plan.
  double lambda_hi = 0.0;
  for (const auto& pg : pages)
    lambda_hi = std::max(lambda_hi, pg.weight / pg.delta);
  if (budget == 0.0 || lambda_hi == 0.0) {
    plan.objective = 0.0;
    return plan;
  }

  // sum p_i(lambda) is continuous, decreasing, and -> inf as lambda -> 0,
  // so shrinking lambda_lo geometrically always brackets the budget.
  double lambda_lo = lambda_hi;
  while (allocation_sum(lambda_lo, pages) < budget) lambda_lo *= 0.5;

  const double target_tol = tol * std::max(budget, 1.0);
  double lambda = lambda_lo;
  double total = allocation_sum(lambda, pages);
  for (int it = 0; it < 400 && std::abs(total - budget) > target_tol; ++it) {
    const double mid = 0.5 * (lambda_lo + lambda_hi);
    if (allocation_sum(mid, pages) > budget) {
      lambda_lo = mid;
    } else {
      lambda_hi = mid;
    }
    lambda = 0.5 * (lambda_lo + lambda_hi);
    total = allocation_sum(lambda, pages);
  }
  if (std::abs(total - budget) > target_tol)
    throw std::runtime_error("optimize: budget bisection did not converge");

  for (std::size_t i = 0; i < pages.size(); ++i)
    plan.rates[i] = allocation(lambda, pages[i]);
  plan.multiplier = lambda;
  plan.objective = objective(plan.rates, pages);
  return plan;
}

CrawlPlan uniform_plan(std::span<const PageSpec> pages, double budget) {
  if (pages.empty()) throw std::invalid_argument("uniform_plan: no pages");
  if (budget < 0.0 || !std::isfinite(budget))
    throw std::invalid_argument("uniform_plan: budget must be >= 0");
  CrawlPlan plan;
  plan.budget = budget;
  plan.rates.assign(pages.size(), budget / static_cast<double>(pages.size()));
  plan.objective = objective(plan.rates, pages);
  return plan;
}

}  // namespace crawlfresh

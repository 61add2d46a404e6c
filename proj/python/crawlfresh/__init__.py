"""Online page-change-rate estimation and crawl-rate optimization."""

from ._crawlfresh import (
    ClipRange,
    CrawlPlan,
    EstimatorState,
    EventTimeline,
    GainSchedule,
    ObservationRecord,
    PageSpec,
    RandomSource,
    __version__,
    arithmetic_grid,
    derive_observations,
    empirical_freshness,
    lln_update,
    log_grid,
    mle_estimate,
    mm_estimate,
    naive_update,
    objective,
    optimize,
    run_stream,
    sa_update,
    sample_crawl_times,
    sample_poisson_process,
    simulate_observation_window,
    simulate_timeline,
    uniform_plan,
)

__all__ = [
    "ClipRange",
    "CrawlPlan",
    "EstimatorState",
    "EventTimeline",
    "GainSchedule",
    "ObservationRecord",
    "PageSpec",
    "RandomSource",
    "__version__",
    "arithmetic_grid",
    "derive_observations",
    "empirical_freshness",
    "lln_update",
    "log_grid",
    "mle_estimate",
    "mm_estimate",
    "naive_update",
    "objective",
    "optimize",
    "run_stream",
    "sa_update",
    "sample_crawl_times",
    "sample_poisson_process",
    "simulate_observation_window",
    "simulate_timeline",
    "uniform_plan",
]

//! Design-space exploration: surrogate-driven Pareto construction,
//! ground-truth finalization, baselines and front comparison.

mod baselines;
mod distance;
mod exhaustive;
mod finalize;
mod heuristic;
mod pareto_set;

pub use baselines::{geometric_levels, random_sampling_baseline, uniform_selection_baseline};
pub use distance::{front_distances, FrontDistances};
pub use exhaustive::{enumerate_choices, exhaustive_estimated, exhaustive_labels, exhaustive_pareto, front_of_samples};
pub use finalize::{load_pareto_csv, reevaluate_and_finalize, save_front_csv, save_pareto_csv, Finalized, Funnel, Reevaluated};
pub use heuristic::{get_neighbour, heuristic_pareto, random_choice, Estimator, ExploreParams, ExploreStats, TableEstimator};
pub use pareto_set::{dominates, ParetoEntry, ParetoSet, Provenance};

/// Fraction of `optimal`'s objective points that also appear in `found`.
pub fn recovery_rate(found: &ParetoSet, optimal: &ParetoSet) -> f64 {
    if optimal.is_empty() {
        return 1.0;
    }
    let hit = optimal
        .entries()
        .iter()
        .filter(|o| found.entries().iter().any(|f| f.qor == o.qor && f.area == o.area))
        .count();
    hit as f64 / optimal.len() as f64
}

use super::heuristic::{random_choice, Estimator};
use super::pareto_set::{ParetoSet, Provenance};
use crate::library::ReducedLibrary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pareto archive of `budget` uniformly drawn configurations.
pub fn random_sampling_baseline(
    sizes: &[usize],
    qor: &dyn Estimator,
    hw: &dyn Estimator,
    budget: usize,
    seed: u64,
) -> ParetoSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = ParetoSet::new();
    for _ in 0..budget {
        let c = random_choice(sizes, &mut rng);
        p.insert(qor.estimate(&c), hw.estimate(&c), &c, Provenance::Estimated);
    }
    p
}

/// For each relative error level, every node takes the entry whose WMED
/// relative to its output range is nearest the level (ties to the smaller
/// area). Returns the distinct configurations in level order.
pub fn uniform_selection_baseline(rl: &ReducedLibrary, levels: &[f64]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &level in levels {
        let choice: Vec<usize> = rl
            .nodes
            .iter()
            .map(|n| {
                let range = n.class.output_range();
                let mut best = 0;
                for (i, e) in n.entries.iter().enumerate() {
                    let d = (e.wmed / range - level).abs();
                    let b = &n.entries[best];
                    let db = (b.wmed / range - level).abs();
                    if d < db || (d == db && e.area < b.area) {
                        best = i;
                    }
                }
                best
            })
            .collect();
        if !out.contains(&choice) {
            out.push(choice);
        }
    }
    out
}

/// `0` followed by `count - 1` geometrically spaced levels in `[lo, hi]`.
pub fn geometric_levels(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v = vec![0.0];
    let m = count.saturating_sub(1);
    for i in 0..m {
        let t = if m > 1 { i as f64 / (m - 1) as f64 } else { 0.0 };
        v.push(lo * (hi / lo).powf(t));
    }
    v
}

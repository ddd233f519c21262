use super::pareto_set::{ParetoSet, Provenance};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Objective estimate for a choice vector (one entry index per node).
pub trait Estimator: Sync {
    fn estimate(&self, choice: &[usize]) -> f64;
}

impl<F: Fn(&[usize]) -> f64 + Sync> Estimator for F {
    fn estimate(&self, choice: &[usize]) -> f64 {
        self(choice)
    }
}

impl Estimator for crate::surrogate::SurrogateEstimator<'_> {
    fn estimate(&self, choice: &[usize]) -> f64 {
        crate::surrogate::SurrogateEstimator::estimate(self, choice)
    }
}

/// Precomputed objective values, e.g. ground truth of an enumerated space.
pub struct TableEstimator {
    values: HashMap<Vec<usize>, f64>,
}

impl TableEstimator {
    pub fn new(values: HashMap<Vec<usize>, f64>) -> TableEstimator {
        TableEstimator { values }
    }
}

impl Estimator for TableEstimator {
    fn estimate(&self, choice: &[usize]) -> f64 {
        self.values.get(choice).copied().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreParams {
    pub max_evaluations: usize,
    /// Iterations without a parent change before a restart.
    pub stagnation: usize,
    pub seed: u64,
}

impl ExploreParams {
    pub fn new(max_evaluations: usize, stagnation: usize, seed: u64) -> Result<ExploreParams> {
        if max_evaluations == 0 || stagnation == 0 {
            return Err(Error::InvalidParameter(
                "evaluation budget and stagnation limit must be at least 1".into(),
            ));
        }
        Ok(ExploreParams {
            max_evaluations,
            stagnation,
            seed,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ExploreStats {
    pub evaluations: usize,
    pub inserts: usize,
    pub restarts: usize,
    /// Distinct configurations estimated.
    pub distinct: usize,
}

pub fn random_choice<R: Rng>(sizes: &[usize], rng: &mut R) -> Vec<usize> {
    sizes.iter().map(|&n| rng.gen_range(0..n)).collect()
}

/// `parent` with one randomly chosen node reassigned to a different
/// entry; `None` when every library is a singleton.
pub fn get_neighbour<R: Rng>(parent: &[usize], sizes: &[usize], rng: &mut R) -> Option<Vec<usize>> {
    let mutable: Vec<usize> = (0..sizes.len()).filter(|&k| sizes[k] > 1).collect();
    if mutable.is_empty() {
        return None;
    }
    let k = mutable[rng.gen_range(0..mutable.len())];
    let mut c = parent.to_vec();
    let r = rng.gen_range(0..sizes[k] - 1);
    c[k] = if r >= parent[k] { r + 1 } else { r };
    Some(c)
}

/// Stochastic hill climbing over the product of the reduced libraries,
/// maintaining an archive of non-dominated estimates. The parent moves to
/// every inserted neighbour and restarts from a random archive member after
/// `stagnation` iterations without moving.
pub fn heuristic_pareto(
    sizes: &[usize],
    qor: &dyn Estimator,
    hw: &dyn Estimator,
    params: &ExploreParams,
) -> (ParetoSet, ExploreStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut cache: HashMap<Vec<usize>, (f64, f64)> = HashMap::new();
    let mut eval = |c: &[usize]| -> (f64, f64) {
        if let Some(&v) = cache.get(c) {
            return v;
        }
        let v = (qor.estimate(c), hw.estimate(c));
        cache.insert(c.to_vec(), v);
        v
    };
    let mut p = ParetoSet::new();
    let mut stats = ExploreStats::default();
    let mut parent = random_choice(sizes, &mut rng);
    let mut unchanged = 0usize;
    for _ in 0..params.max_evaluations {
        let c = get_neighbour(&parent, sizes, &mut rng).unwrap_or_else(|| parent.clone());
        let (q, a) = eval(&c);
        stats.evaluations += 1;
        if p.insert(q, a, &c, Provenance::Estimated) {
            stats.inserts += 1;
            parent = c;
            unchanged = 0;
        } else {
            unchanged += 1;
            if unchanged >= params.stagnation && !p.is_empty() {
                parent = p.pick(&mut rng).choice.clone();
                unchanged = 0;
                stats.restarts += 1;
            }
        }
        debug_assert!(p.len() < 64 || stats.evaluations % 4096 != 0 || p.is_antichain());
    }
    stats.distinct = cache.len();
    (p, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbour_differs_in_one_node() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sizes = [3, 1, 4, 2];
        let parent = vec![2, 0, 0, 1];
        for _ in 0..500 {
            let n = get_neighbour(&parent, &sizes, &mut rng).unwrap();
            assert_eq!(n.iter().zip(&parent).filter(|(a, b)| a != b).count(), 1);
            assert_eq!(n[1], 0);
            assert!(n.iter().zip(&sizes).all(|(&v, &s)| v < s));
        }
        assert_eq!(get_neighbour(&[0, 0], &[1, 1], &mut rng), None);
    }

    #[test]
    fn singleton_space_yields_the_only_configuration() {
        let params = ExploreParams::new(20, 5, 0).unwrap();
        let (p, _) = heuristic_pareto(&[1, 1, 1], &|_: &[usize]| 0.5, &|_: &[usize]| 10.0, &params);
        assert_eq!(p.len(), 1);
        assert_eq!(p.entries()[0].choice, vec![0, 0, 0]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let q = |c: &[usize]| -(c.iter().sum::<usize>() as f64);
        let h = |c: &[usize]| c.iter().enumerate().map(|(i, &v)| ((i + 1) * (7 - v)) as f64).sum::<f64>();
        let params = ExploreParams::new(2000, 50, 9).unwrap();
        let a = heuristic_pareto(&[8, 8, 8], &q, &h, &params);
        let b = heuristic_pareto(&[8, 8, 8], &q, &h, &params);
        assert_eq!(a, b);
        assert!(a.0.is_antichain());
        assert!(ExploreParams::new(0, 50, 0).is_err());
    }
}

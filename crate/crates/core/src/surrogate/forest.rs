use super::cart::{RegressionTree, TreeParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub trees: usize,
    /// Features per split; `None` means `ceil(d / 3)`.
    pub max_features: Option<usize>,
    pub min_leaf: usize,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> ForestParams {
        ForestParams {
            trees: 100,
            max_features: None,
            min_leaf: 2,
            bootstrap: true,
            seed: 0,
        }
    }
}

/// Bagged regression trees with per-split feature subsampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    trees: Vec<RegressionTree>,
}

fn tree_seed(base: u64, i: usize) -> u64 {
    // splitmix64 step
    let mut z = base.wrapping_add((i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomForest {
    pub fn fit(x: &[Vec<f64>], y: &[f64], p: ForestParams) -> RandomForest {
        let n = y.len();
        let d = x.first().map_or(1, Vec::len);
        let max_features = p.max_features.unwrap_or(d.div_ceil(3)).clamp(1, d);
        let tp = TreeParams {
            min_leaf: p.min_leaf,
            max_depth: None,
            max_features: Some(max_features),
        };
        let trees = (0..p.trees.max(1))
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(tree_seed(p.seed, i));
                let rows: Vec<usize> = if p.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                RegressionTree::fit_rows(x, y, rows, tp, Some(&mut rng))
            })
            .collect();
        RandomForest { trees }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for t in &self.trees {
            s += t.predict(x);
        }
        s / self.trees.len() as f64
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }
}

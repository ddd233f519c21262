use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf(f64),
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Regression tree grown by greedy variance reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    nodes: Vec<TreeNode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// Minimum number of samples in each child.
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    /// Features examined per split; `None` examines all of them in order.
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> TreeParams {
        TreeParams {
            min_leaf: 2,
            max_depth: None,
            max_features: None,
        }
    }
}

struct Best {
    feature: usize,
    threshold: f64,
    sse: f64,
}

struct Grower<'d, R> {
    x: &'d [Vec<f64>],
    y: &'d [f64],
    params: TreeParams,
    rng: Option<&'d mut R>,
    nodes: Vec<TreeNode>,
    order: Vec<usize>,
}

fn mean(y: &[f64], idx: &[usize]) -> f64 {
    let mut s = 0.0;
    for &i in idx {
        s += y[i];
    }
    s / idx.len() as f64
}

impl<R: Rng> Grower<'_, R> {
    fn best_split(&mut self, idx: &[usize]) -> Option<Best> {
        let d = self.x[0].len();
        let min_leaf = self.params.min_leaf.max(1);
        let n = idx.len();
        let mut features: Vec<usize> = (0..d).collect();
        let wanted = match (self.params.max_features, self.rng.as_deref_mut()) {
            (Some(m), Some(rng)) if m < d => {
                features.shuffle(rng);
                m.max(1)
            }
            _ => d,
        };
        let mut best: Option<Best> = None;
        let total: f64 = idx.iter().map(|&i| self.y[i]).sum();
        let mut examined = 0;
        for &f in &features {
            if examined >= wanted && best.is_some() {
                break;
            }
            examined += 1;
            self.order.clear();
            self.order.extend_from_slice(idx);
            let x = self.x;
            self.order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
            let mut left_sum = 0.0;
            let mut left_sq = 0.0;
            let total_sq: f64 = idx.iter().map(|&i| self.y[i] * self.y[i]).sum();
            for s in 0..n - 1 {
                let yi = self.y[self.order[s]];
                left_sum += yi;
                left_sq += yi * yi;
                let nl = s + 1;
                let nr = n - nl;
                let (xa, xb) = (x[self.order[s]][f], x[self.order[s + 1]][f]);
                if nl < min_leaf || nr < min_leaf || xa == xb {
                    continue;
                }
                let right_sum = total - left_sum;
                let right_sq = total_sq - left_sq;
                let sse = (left_sq - left_sum * left_sum / nl as f64) + (right_sq - right_sum * right_sum / nr as f64);
                if best.as_ref().map_or(true, |b| sse < b.sse) {
                    best = Some(Best {
                        feature: f,
                        threshold: xa + (xb - xa) / 2.0,
                        sse,
                    });
                }
            }
        }
        best
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        let value = mean(self.y, &idx);
        self.nodes.push(TreeNode::Leaf(value));
        let first = self.y[idx[0]];
        let constant = idx.iter().all(|&i| self.y[i] == first);
        let depth_ok = self.params.max_depth.map_or(true, |m| depth < m);
        if constant || !depth_ok || idx.len() < 2 * self.params.min_leaf.max(1) {
            return id;
        }
        let Some(best) = self.best_split(&idx) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = idx
            .iter()
            .partition(|&&i| self.x[i][best.feature] <= best.threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }
}

impl RegressionTree {
    /// Fits on the rows `sample` of (`x`, `y`); repeated rows count
    /// repeatedly. `rng` drives feature subsampling only.
    pub fn fit_rows<R: Rng>(x: &[Vec<f64>], y: &[f64], sample: Vec<usize>, params: TreeParams, rng: Option<&mut R>) -> RegressionTree {
        assert!(!sample.is_empty(), "tree needs at least one sample");
        let mut g = Grower {
            x,
            y,
            params,
            rng,
            nodes: Vec::new(),
            order: Vec::with_capacity(sample.len()),
        };
        g.grow(sample, 0);
        RegressionTree { nodes: g.nodes }
    }

    pub fn fit(x: &[Vec<f64>], y: &[f64], params: TreeParams) -> RegressionTree {
        RegressionTree::fit_rows::<rand_chacha::ChaCha8Rng>(x, y, (0..y.len()).collect(), params, None)
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf(v) => return v,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf(_))).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_step_function_exactly() {
        let x: Vec<Vec<f64>> = (0..20).map(|i| vec![f64::from(i), 0.0]).collect();
        let y: Vec<f64> = (0..20).map(|i| if i < 7 { 1.0 } else { 5.0 }).collect();
        let t = RegressionTree::fit(&x, &y, TreeParams::default());
        assert_eq!(t.leaf_count(), 2);
        assert_eq!(t.predict(&[3.0, 9.0]), 1.0);
        assert_eq!(t.predict(&[6.5, 0.0]), 1.0);
        assert_eq!(t.predict(&[6.6, 0.0]), 5.0);
    }

    #[test]
    fn leaves_respect_minimum_size() {
        let x: Vec<Vec<f64>> = (0..9).map(|i| vec![f64::from(i)]).collect();
        let y: Vec<f64> = (0..9).map(|i| f64::from(i * i)).collect();
        let t = RegressionTree::fit(&x, &y, TreeParams::default());
        assert!(t.leaf_count() <= 4);
        let deep = RegressionTree::fit(&x, &y, TreeParams { min_leaf: 1, ..TreeParams::default() });
        assert_eq!(deep.leaf_count(), 9);
        for i in 0..9 {
            assert_eq!(deep.predict(&x[i]), y[i]);
        }
    }

    #[test]
    fn constant_labels_give_single_leaf() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![f64::from(i)]).collect();
        let t = RegressionTree::fit(&x, &[4.0; 10], TreeParams::default());
        assert_eq!(t.leaf_count(), 1);
        assert_eq!(t.predict(&[100.0]), 4.0);
    }
}

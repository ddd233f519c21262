use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontDistances {
    pub to_opt_avg: f64,
    pub to_opt_max: f64,
    pub from_opt_avg: f64,
    pub from_opt_max: f64,
}

/// Directed nearest-neighbour distances between two fronts of
/// `(qor, area)` points, after min-max scaling each axis to `[0, 1]` over
/// the union of both fronts.
pub fn front_distances(obtained: &[(f64, f64)], optimal: &[(f64, f64)]) -> Result<FrontDistances> {
    if obtained.is_empty() || optimal.is_empty() {
        return Err(Error::Empty("front distances need two non-empty fronts".into()));
    }
    let all = obtained.iter().chain(optimal);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for (k, v) in [p.0, p.1].into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let norm = |p: &(f64, f64)| -> [f64; 2] {
        let f = |v: f64, k: usize| if hi[k] > lo[k] { (v - lo[k]) / (hi[k] - lo[k]) } else { 0.0 };
        [f(p.0, 0), f(p.1, 1)]
    };
    let a: Vec<[f64; 2]> = obtained.iter().map(norm).collect();
    let b: Vec<[f64; 2]> = optimal.iter().map(norm).collect();
    let directed = |from: &[[f64; 2]], to: &[[f64; 2]]| -> (f64, f64) {
        let mut sum = 0.0;
        let mut max = 0.0f64;
        for p in from {
            let d = to
                .iter()
                .map(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            sum += d;
            max = max.max(d);
        }
        (sum / from.len() as f64, max)
    };
    let (to_opt_avg, to_opt_max) = directed(&a, &b);
    let (from_opt_avg, from_opt_max) = directed(&b, &a);
    Ok(FrontDistances {
        to_opt_avg,
        to_opt_max,
        from_opt_avg,
        from_opt_max,
    })
}

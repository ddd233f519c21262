use serde::{Deserialize, Serialize};

/// Inverse-distance-weighted k-nearest-neighbour regression on
/// standardized features.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Knn {
    k: usize,
    mean: Vec<f64>,
    scale: Vec<f64>,
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
}

impl Knn {
    pub fn fit(x: &[Vec<f64>], y: &[f64], k: usize) -> Knn {
        let n = x.len() as f64;
        let d = x.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; d];
        for r in x {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut scale = vec![0.0; d];
        for r in x {
            for j in 0..d {
                scale[j] += (r[j] - mean[j]).powi(2);
            }
        }
        for s in &mut scale {
            *s = (*s / n).sqrt();
            if *s == 0.0 {
                *s = 1.0;
            }
        }
        let xs = x
            .iter()
            .map(|r| r.iter().enumerate().map(|(j, v)| (v - mean[j]) / scale[j]).collect())
            .collect();
        Knn {
            k: k.max(1),
            mean,
            scale,
            xs,
            ys: y.to_vec(),
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let q: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, v)| (v - self.mean[j]) / self.scale[j])
            .collect();
        // (distance^2, index), kept sorted, at most k long.
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(self.k + 1);
        for (i, r) in self.xs.iter().enumerate() {
            let mut d2 = 0.0;
            for (a, b) in r.iter().zip(&q) {
                d2 += (a - b) * (a - b);
            }
            if best.len() == self.k && d2 >= best[self.k - 1].0 {
                continue;
            }
            let pos = best.partition_point(|e| e.0 <= d2);
            best.insert(pos, (d2, i));
            best.truncate(self.k);
        }
        let exact: Vec<&(f64, usize)> = best.iter().filter(|e| e.0 == 0.0).collect();
        if !exact.is_empty() {
            return exact.iter().map(|e| self.ys[e.1]).sum::<f64>() / exact.len() as f64;
        }
        let mut wsum = 0.0;
        let mut s = 0.0;
        for &(d2, i) in &best {
            let w = 1.0 / d2.sqrt();
            wsum += w;
            s += w * self.ys[i];
        }
        s / wsum
    }
}

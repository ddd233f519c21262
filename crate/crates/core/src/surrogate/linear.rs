use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Ordinary least squares with intercept, solved by SVD.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linear {
    pub intercept: f64,
    pub coef: Vec<f64>,
}

impl Linear {
    pub fn fit(x: &[Vec<f64>], y: &[f64]) -> Linear {
        let n = x.len();
        let d = x.first().map_or(0, Vec::len);
        let a = DMatrix::from_fn(n, d + 1, |i, j| if j == 0 { 1.0 } else { x[i][j - 1] });
        let b = DVector::from_column_slice(y);
        let svd = a.svd(true, true);
        let sol = svd
            .solve(&b, 1e-10)
            .unwrap_or_else(|_| DVector::zeros(d + 1));
        Linear {
            intercept: sol[0],
            coef: sol.iter().skip(1).copied().collect(),
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut s = self.intercept;
        for (c, v) in self.coef.iter().zip(x) {
            s += c * v;
        }
        s
    }
}

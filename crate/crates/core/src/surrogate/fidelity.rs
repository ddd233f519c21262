use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Equality tolerance of the pairwise order relation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Tie {
    Absolute(f64),
    /// Relative to the larger magnitude of the pair.
    Relative(f64),
}

impl Tie {
    /// Tolerance for QoR (SSIM) values.
    pub const QOR: Tie = Tie::Absolute(1e-9);
    /// Tolerance for hardware costs.
    pub const HW: Tie = Tie::Relative(1e-6);

    pub fn relation(self, a: f64, b: f64) -> Ordering {
        let eps = match self {
            Tie::Absolute(e) => e,
            Tie::Relative(r) => r * a.abs().max(b.abs()),
        };
        if (a - b).abs() <= eps {
            Ordering::Equal
        } else if a < b {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// Fraction of unordered pairs whose estimates stand in the same relation
/// (`<`, `=`, `>`) as their true values.
pub fn fidelity(estimates: &[f64], truths: &[f64], tie: Tie) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::LengthMismatch(format!(
            "{} estimates for {} true values",
            estimates.len(),
            truths.len()
        )));
    }
    let n = estimates.len();
    if n < 2 {
        return Err(Error::Empty("fidelity needs at least two values".into()));
    }
    let mut agree = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if tie.relation(estimates[i], estimates[j]) == tie.relation(truths[i], truths[j]) {
                agree += 1;
            }
        }
    }
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    Ok(agree as f64 / pairs as f64)
}

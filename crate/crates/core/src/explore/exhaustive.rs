use super::heuristic::Estimator;
use super::pareto_set::{ParetoEntry, ParetoSet, Provenance};
use crate::error::{Error, Result};
use crate::library::ReducedLibrary;
use crate::surrogate::{label, Sample};
use crate::truth::GroundTruth;
use rayon::prelude::*;

/// Every choice vector of the product space in lexicographic order.
pub fn enumerate_choices(sizes: &[usize], cap: u64) -> Result<Vec<Vec<usize>>> {
    let size: f64 = sizes.iter().map(|&n| n as f64).product();
    if size > cap as f64 || sizes.contains(&0) {
        return Err(Error::SpaceTooLarge { size, cap });
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut c = vec![0usize; sizes.len()];
    loop {
        out.push(c.clone());
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            c[k] += 1;
            if c[k] < sizes[k] {
                break;
            }
            c[k] = 0;
        }
    }
}

/// Ground-truth labels of the whole space spanned by `rl`.
pub fn exhaustive_labels(truth: &GroundTruth<'_>, rl: &ReducedLibrary, cap: u64) -> Result<Vec<Sample>> {
    let choices = enumerate_choices(&rl.sizes(), cap)?;
    label(truth, rl, &choices)
}

/// True (qor, area) Pareto front of labelled samples.
pub fn front_of_samples(samples: &[Sample]) -> ParetoSet {
    ParetoSet::from_entries(samples.iter().map(|s| ParetoEntry {
        qor: s.labels.qor,
        area: s.labels.area,
        choice: s.choice.clone(),
        provenance: Provenance::Real,
    }))
}

pub fn exhaustive_pareto(truth: &GroundTruth<'_>, rl: &ReducedLibrary, cap: u64) -> Result<ParetoSet> {
    Ok(front_of_samples(&exhaustive_labels(truth, rl, cap)?))
}

/// Front of the whole space as seen by a pair of estimators.
pub fn exhaustive_estimated(sizes: &[usize], qor: &dyn Estimator, hw: &dyn Estimator, cap: u64) -> Result<ParetoSet> {
    let choices = enumerate_choices(sizes, cap)?;
    let scored: Vec<(f64, f64)> = choices.par_iter().map(|c| (qor.estimate(c), hw.estimate(c))).collect();
    Ok(ParetoSet::from_entries(choices.into_iter().zip(scored).map(|(choice, (q, a))| ParetoEntry {
        qor: q,
        area: a,
        choice,
        provenance: Provenance::Estimated,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_choices(&[1, 1], 10).unwrap(), vec![vec![0, 0]]);
        let all = enumerate_choices(&[6; 5], 7776).unwrap();
        assert_eq!(all.len(), 7776);
        assert_eq!(all[1], vec![0, 0, 0, 0, 1]);
        assert_eq!(all[7775], vec![5; 5]);
        match enumerate_choices(&[6; 5], 7775) {
            Err(Error::SpaceTooLarge { size, .. }) => assert_eq!(size, 7776.0),
            other => panic!("{other:?}"),
        }
    }
}

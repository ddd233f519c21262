use crate::accel::Configuration;
use crate::error::{Error, Result};
use crate::library::ReducedLibrary;
use crate::truth::{GroundTruth, Labels};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashSet;
use std::path::Path;

/// A labelled configuration, given as one entry index per node.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub choice: Vec<usize>,
    pub labels: Labels,
}

/// `counts[i]` configurations for each set `i`, drawn uniformly per node,
/// distinct within and across sets.
pub fn sample_choices(rl: &ReducedLibrary, counts: &[usize], seed: u64) -> Result<Vec<Vec<Vec<usize>>>> {
    let total: usize = counts.iter().sum();
    if (total as f64) > rl.space_size() {
        return Err(Error::InvalidParameter(format!(
            "{total} distinct configurations requested from a space of {}",
            rl.space_size()
        )));
    }
    let sizes = rl.sizes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(total);
    let mut out = Vec::with_capacity(counts.len());
    for &c in counts {
        let mut set = Vec::with_capacity(c);
        while set.len() < c {
            let choice: Vec<usize> = sizes.iter().map(|&n| rng.gen_range(0..n)).collect();
            if seen.insert(choice.clone()) {
                set.push(choice);
            }
        }
        out.push(set);
    }
    Ok(out)
}

/// Ground-truth labels of every choice vector, in input order.
pub fn label(truth: &GroundTruth<'_>, rl: &ReducedLibrary, choices: &[Vec<usize>]) -> Result<Vec<Sample>> {
    choices
        .par_iter()
        .map(|c| {
            Ok(Sample {
                choice: c.clone(),
                labels: truth.evaluate(&Configuration(rl.circuits(c)))?,
            })
        })
        .collect()
}

/// `count` distinct uniformly drawn configurations with ground-truth labels.
pub fn sample_training_set(truth: &GroundTruth<'_>, rl: &ReducedLibrary, count: usize, seed: u64) -> Result<Vec<Sample>> {
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let choices = sample_choices(rl, &[count], seed)?.remove(0);
    label(truth, rl, &choices)
}

/// Writes samples as CSV: one circuit-id column per node, then the labels.
pub fn save_samples(path: &Path, rl: &ReducedLibrary, samples: &[Sample]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = rl.nodes.iter().map(|n| n.node.clone()).collect();
    header.extend(["qor", "area", "delay", "power"].map(String::from));
    w.write_record(&header)?;
    for s in samples {
        let mut rec: Vec<String> = rl
            .nodes
            .iter()
            .zip(&s.choice)
            .map(|(n, &c)| n.entries[c].id.clone())
            .collect();
        let l = s.labels;
        rec.extend([l.qor, l.area, l.delay, l.power].map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads samples written by [`save_samples`] against the same library.
pub fn load_samples(path: &Path, rl: &ReducedLibrary) -> Result<Vec<Sample>> {
    let ctx = |m: String| Error::Format(format!("{}: {m}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(|e| ctx(e.to_string()))?;
    let n = rl.nodes.len();
    let header = r.headers()?.clone();
    if header.len() != n + 4 || header.iter().zip(&rl.nodes).any(|(h, node)| h != node.node) {
        return Err(ctx("columns do not match the reduced library".into()));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut choice = Vec::with_capacity(n);
        for (k, node) in rl.nodes.iter().enumerate() {
            let id = &rec[k];
            let c = node
                .entries
                .iter()
                .position(|e| e.id == id)
                .ok_or_else(|| ctx(format!("circuit `{id}` is not in the library of node `{}`", node.node)))?;
            choice.push(c);
        }
        let num = |i: usize| rec[n + i].parse::<f64>().map_err(|e| ctx(e.to_string()));
        out.push(Sample {
            choice,
            labels: Labels {
                qor: num(0)?,
                area: num(1)?,
                delay: num(2)?,
                power: num(3)?,
            },
        });
    }
    Ok(out)
}

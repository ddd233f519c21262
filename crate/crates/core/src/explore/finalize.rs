use super::pareto_set::{ParetoEntry, ParetoSet, Provenance};
use crate::accel::{AccelGraph, Configuration};
use crate::circgen::Catalog;
use crate::error::{Error, Result};
use crate::library::ReducedLibrary;
use crate::truth::{GroundTruth, Labels};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

/// A pseudo-Pareto member with its estimates and real labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Reevaluated {
    pub choice: Vec<usize>,
    pub est_qor: f64,
    pub est_area: f64,
    pub real: Labels,
    pub on_final: bool,
}

impl Reevaluated {
    /// Power-delay product of the synthesized accelerator.
    pub fn energy_proxy(&self) -> f64 {
        self.real.power * self.real.delay
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finalized {
    pub rows: Vec<Reevaluated>,
    pub front: ParetoSet,
}

/// Labels every pseudo-Pareto member with ground truth and keeps the
/// non-dominated ones.
pub fn reevaluate_and_finalize(pseudo: &ParetoSet, truth: &GroundTruth<'_>, rl: &ReducedLibrary) -> Result<Finalized> {
    let labels: Vec<Labels> = pseudo
        .entries()
        .par_iter()
        .map(|e| truth.evaluate(&Configuration(rl.circuits(&e.choice))))
        .collect::<Result<_>>()?;
    let front = ParetoSet::from_entries(pseudo.entries().iter().zip(&labels).map(|(e, l)| ParetoEntry {
        qor: l.qor,
        area: l.area,
        choice: e.choice.clone(),
        provenance: Provenance::Real,
    }));
    let rows = pseudo
        .entries()
        .iter()
        .zip(labels)
        .map(|(e, real)| Reevaluated {
            choice: e.choice.clone(),
            est_qor: e.qor,
            est_area: e.area,
            real,
            on_final: front.entries().iter().any(|f| f.choice == e.choice),
        })
        .collect();
    Ok(Finalized { rows, front })
}

/// Design-space size after each stage of the flow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Funnel {
    /// Every catalog circuit of the matching class at every node.
    pub all: f64,
    pub reduced: f64,
    pub pseudo: usize,
    pub final_front: usize,
}

impl Funnel {
    pub fn new(graph: &AccelGraph, catalog: &Catalog, rl: &ReducedLibrary, pseudo: usize, final_front: usize) -> Funnel {
        let all = (0..graph.op_count())
            .map(|k| catalog.of_class(graph.op_class(k)).len() as f64)
            .product();
        Funnel {
            all,
            reduced: rl.space_size(),
            pseudo,
            final_front,
        }
    }

    pub fn stages(&self) -> [(&'static str, f64); 4] {
        [
            ("all", self.all),
            ("reduced", self.reduced),
            ("pseudo", self.pseudo as f64),
            ("final", self.final_front as f64),
        ]
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["stage", "count"])?;
        for (s, c) in self.stages() {
            w.write_record([s.to_string(), format!("{c:e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Writes re-evaluated members, one circuit-id column per node.
pub fn save_front_csv(path: &Path, rl: &ReducedLibrary, rows: &[Reevaluated]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = rl.nodes.iter().map(|n| n.node.clone()).collect();
    header.extend(
        ["est_qor", "est_area", "real_qor", "real_area", "real_delay", "real_power", "energy_proxy", "provenance"]
            .map(String::from),
    );
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = rl.nodes.iter().zip(&r.choice).map(|(n, &c)| n.entries[c].id.clone()).collect();
        rec.extend([r.est_qor, r.est_area, r.real.qor, r.real.area, r.real.delay, r.real.power, r.energy_proxy()].map(|v| v.to_string()));
        rec.push(if r.on_final { "real" } else { "estimated" }.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a front with only one set of objectives.
pub fn save_pareto_csv(path: &Path, rl: &ReducedLibrary, set: &ParetoSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = rl.nodes.iter().map(|n| n.node.clone()).collect();
    header.extend(["qor", "area", "provenance"].map(String::from));
    w.write_record(&header)?;
    for e in set.entries() {
        let mut rec: Vec<String> = rl.nodes.iter().zip(&e.choice).map(|(n, &c)| n.entries[c].id.clone()).collect();
        rec.extend([e.qor.to_string(), e.area.to_string()]);
        rec.push(match e.provenance {
            Provenance::Estimated => "estimated".into(),
            Provenance::Real => "real".into(),
        });
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a front written by [`save_pareto_csv`].
pub fn load_pareto_csv(path: &Path, rl: &ReducedLibrary) -> Result<ParetoSet> {
    let mut r = csv::Reader::from_path(path)?;
    let n = rl.nodes.len();
    let mut entries = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != n + 3 {
            return Err(Error::Parse {
                line: line + 2,
                msg: format!("expected {} fields, found {}", n + 3, rec.len()),
            });
        }
        let mut choice = Vec::with_capacity(n);
        for (k, node) in rl.nodes.iter().enumerate() {
            let id = &rec[k];
            let pos = node.entries.iter().position(|e| e.id == id).ok_or_else(|| Error::Parse {
                line: line + 2,
                msg: format!("circuit {id} is not in the reduced library of {}", node.node),
            })?;
            choice.push(pos);
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line: line + 2,
                msg: e.to_string(),
            })
        };
        let provenance = match &rec[n + 2] {
            "real" => Provenance::Real,
            _ => Provenance::Estimated,
        };
        entries.push(ParetoEntry {
            qor: num(&rec[n])?,
            area: num(&rec[n + 1])?,
            choice,
            provenance,
        });
    }
    Ok(ParetoSet::from_entries(entries))
}

use super::ssim::SsimReference;
use crate::accel::{AccelGraph, Configuration, Simulator, Workload};
use crate::circgen::Catalog;
use crate::error::Result;
use rayon::prelude::*;
use serde::Serialize;

/// Per-item SSIM values of one configuration and their mean.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QorReport {
    pub items: Vec<(String, f64)>,
    pub mean: f64,
}

impl QorReport {
    pub fn from_items(items: Vec<(String, f64)>) -> QorReport {
        let mut s = 0.0;
        for (_, v) in &items {
            s += v;
        }
        let mean = s / items.len().max(1) as f64;
        QorReport { items, mean }
    }
}

/// QoR protocol of a benchmark: the exact-configuration outputs of every
/// workload item serve as SSIM references.
pub struct QorEvaluator<'a> {
    graph: &'a AccelGraph,
    catalog: &'a Catalog,
    workload: &'a Workload,
    references: Vec<SsimReference>,
}

impl<'a> QorEvaluator<'a> {
    pub fn new(graph: &'a AccelGraph, catalog: &'a Catalog, workload: &'a Workload) -> Result<QorEvaluator<'a>> {
        let exact = Configuration::exact(graph, catalog)?;
        let sim = Simulator::new(graph, catalog, &exact)?;
        let references = workload
            .items
            .par_iter()
            .map(|it| SsimReference::new(&sim.image(&it.stimulus, it.width, it.height)?))
            .collect::<Result<_>>()?;
        Ok(QorEvaluator {
            graph,
            catalog,
            workload,
            references,
        })
    }

    pub fn graph(&self) -> &'a AccelGraph {
        self.graph
    }

    pub fn catalog(&self) -> &'a Catalog {
        self.catalog
    }

    pub fn workload(&self) -> &'a Workload {
        self.workload
    }

    pub fn evaluate(&self, config: &Configuration) -> Result<QorReport> {
        let sim = Simulator::new(self.graph, self.catalog, config)?;
        let items = self
            .workload
            .items
            .iter()
            .zip(&self.references)
            .map(|(it, r)| Ok((it.label.clone(), r.compare(&sim.image(&it.stimulus, it.width, it.height)?)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(QorReport::from_items(items))
    }

    pub fn mean_ssim(&self, config: &Configuration) -> Result<f64> {
        Ok(self.evaluate(config)?.mean)
    }
}

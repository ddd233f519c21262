//! Ground-truth labels of a configuration: mean SSIM and synthesized cost.

use crate::accel::{AccelGraph, Configuration, Workload};
use crate::circgen::Catalog;
use crate::error::Result;
use crate::quality::QorEvaluator;
use crate::synth::hw_cost;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Labels {
    pub qor: f64,
    pub area: f64,
    pub delay: f64,
    pub power: f64,
}

/// Simulation plus synthesis of configurations of one benchmark.
pub struct GroundTruth<'a> {
    qor: QorEvaluator<'a>,
}

impl<'a> GroundTruth<'a> {
    pub fn new(graph: &'a AccelGraph, catalog: &'a Catalog, workload: &'a Workload) -> Result<GroundTruth<'a>> {
        Ok(GroundTruth {
            qor: QorEvaluator::new(graph, catalog, workload)?,
        })
    }

    pub fn graph(&self) -> &'a AccelGraph {
        self.qor.graph()
    }

    pub fn catalog(&self) -> &'a Catalog {
        self.qor.catalog()
    }

    pub fn qor(&self) -> &QorEvaluator<'a> {
        &self.qor
    }

    pub fn evaluate(&self, config: &Configuration) -> Result<Labels> {
        let qor = self.qor.mean_ssim(config)?;
        let hw = hw_cost(self.graph(), config, self.catalog())?;
        Ok(Labels {
            qor,
            area: hw.area,
            delay: hw.delay,
            power: hw.power,
        })
    }
}

use crate::circgen::Catalog;
use crate::library::ReducedLibrary;
use serde::{Deserialize, Serialize};

/// Which objective a model estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Mean SSIM; features are per-node WMEDs.
    Qor,
    /// Area; features are per-node (area, power, delay) triples.
    Hw,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Qor => "qor",
            Target::Hw => "hw",
        }
    }

    pub fn tie(self) -> super::Tie {
        match self {
            Target::Qor => super::Tie::QOR,
            Target::Hw => super::Tie::HW,
        }
    }
}

/// Feature table of a reduced library: per node, per entry, the feature
/// values that entry contributes.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSpec {
    target: Target,
    per_node: usize,
    table: Vec<Vec<Vec<f64>>>,
}

impl FeatureSpec {
    pub fn new(target: Target, rl: &ReducedLibrary, catalog: &Catalog) -> FeatureSpec {
        let table = rl
            .nodes
            .iter()
            .map(|n| {
                n.entries
                    .iter()
                    .map(|e| match target {
                        Target::Qor => vec![e.wmed],
                        Target::Hw => {
                            let ch = &catalog.get(e.circuit).characterization;
                            vec![ch.area, ch.power, ch.delay]
                        }
                    })
                    .collect()
            })
            .collect();
        FeatureSpec {
            target,
            per_node: match target {
                Target::Qor => 1,
                Target::Hw => 3,
            },
            table,
        }
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn dim(&self) -> usize {
        self.table.len() * self.per_node
    }

    /// Features of a choice vector (one entry index per node).
    pub fn extract(&self, choice: &[usize]) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        for (node, &c) in self.table.iter().zip(choice) {
            v.extend_from_slice(&node[c]);
        }
        v
    }
}

use super::pareto::{pareto_filter, Candidate};
use super::pmf::Pmf;
use crate::accel::AccelGraph;
use crate::circgen::{Catalog, OpClass};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// A surviving circuit with the scores used to select it.
#[derive(Clone, Debug, PartialEq)]
pub struct RlEntry {
    /// Catalog index.
    pub circuit: usize,
    pub id: String,
    pub wmed: f64,
    pub area: f64,
}

/// Reduced library of one operation node, ordered by increasing wmed.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeLibrary {
    pub node: String,
    pub class: OpClass,
    pub entries: Vec<RlEntry>,
}

impl NodeLibrary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Per-node reduced libraries, in operation-node order of the graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedLibrary {
    pub nodes: Vec<NodeLibrary>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    node_id: String,
    circuit_id: String,
    wmed: f64,
    area: f64,
}

/// Keys the per-operation PMFs by node name.
pub fn pmf_map(graph: &AccelGraph, pmfs: Vec<Pmf>) -> BTreeMap<String, Pmf> {
    (0..graph.op_count()).map(|k| graph.op_name(k).to_string()).zip(pmfs).collect()
}

/// Scores every catalog circuit of each node's class under the node's PMF
/// and keeps the `(wmed, area)` Pareto front.
pub fn reduce_library(catalog: &Catalog, graph: &AccelGraph, pmfs: &BTreeMap<String, Pmf>) -> Result<ReducedLibrary> {
    let mut nodes = Vec::with_capacity(graph.op_count());
    for k in 0..graph.op_count() {
        let name = graph.op_name(k);
        let class = graph.op_class(k);
        let pmf = pmfs.get(name).ok_or_else(|| Error::MissingPmf(name.to_string()))?;
        if pmf.class() != class {
            return Err(Error::ClassMismatch {
                expected: class.to_string(),
                found: pmf.class().to_string(),
            });
        }
        let prepared = pmf.prepare();
        let members = catalog.of_class(class);
        if members.is_empty() {
            return Err(Error::UnknownCircuit(format!("any {class} circuit for node `{name}`")));
        }
        let scored: Vec<Candidate> = members
            .par_iter()
            .map(|&i| {
                let c = catalog.get(i);
                Ok(Candidate::new(c.id.clone(), prepared.wmed(&c.netlist)?, c.characterization.area))
            })
            .collect::<Result<_>>()?;
        let entries = pareto_filter(&scored)
            .into_iter()
            .map(|c| RlEntry {
                circuit: catalog.index_of(&c.id).expect("scored ids come from the catalog"),
                id: c.id,
                wmed: c.wmed,
                area: c.area,
            })
            .collect();
        nodes.push(NodeLibrary {
            node: name.to_string(),
            class,
            entries,
        });
    }
    Ok(ReducedLibrary { nodes })
}

impl ReducedLibrary {
    pub fn sizes(&self) -> Vec<usize> {
        self.nodes.iter().map(NodeLibrary::len).collect()
    }

    /// Number of configurations, as a float since it may overflow.
    pub fn space_size(&self) -> f64 {
        self.nodes.iter().map(|n| n.len() as f64).product()
    }

    /// Keeps at most `max` entries per node, evenly spread along each front
    /// and always including both ends.
    pub fn capped(&self, max: usize) -> ReducedLibrary {
        let max = max.max(1);
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let len = n.entries.len();
                let entries = if len <= max {
                    n.entries.clone()
                } else if max == 1 {
                    vec![n.entries[0].clone()]
                } else {
                    (0..max)
                        .map(|i| n.entries[(i * (len - 1) + (max - 1) / 2) / (max - 1)].clone())
                        .collect()
                };
                NodeLibrary {
                    entries,
                    ..n.clone()
                }
            })
            .collect();
        ReducedLibrary { nodes }
    }

    /// Catalog indices of a choice vector (one entry index per node).
    pub fn circuits(&self, choice: &[usize]) -> Vec<usize> {
        self.nodes
            .iter()
            .zip(choice)
            .map(|(n, &c)| n.entries[c].circuit)
            .collect()
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for n in &self.nodes {
            for e in &n.entries {
                w.serialize(Row {
                    node_id: n.node.clone(),
                    circuit_id: e.id.clone(),
                    wmed: e.wmed,
                    area: e.area,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a library written by [`ReducedLibrary::save_csv`]; node order
    /// follows the graph.
    pub fn load_csv(path: &Path, graph: &AccelGraph, catalog: &Catalog) -> Result<ReducedLibrary> {
        let mut r = csv::Reader::from_path(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        let mut by_node: BTreeMap<String, Vec<RlEntry>> = BTreeMap::new();
        for row in r.deserialize::<Row>() {
            let row = row?;
            by_node.entry(row.node_id).or_default().push(RlEntry {
                circuit: catalog.resolve(&row.circuit_id)?,
                id: row.circuit_id,
                wmed: row.wmed,
                area: row.area,
            });
        }
        let mut nodes = Vec::new();
        for k in 0..graph.op_count() {
            let name = graph.op_name(k);
            let entries = by_node
                .remove(name)
                .ok_or_else(|| Error::Format(format!("{}: no entries for node `{name}`", path.display())))?;
            let class = graph.op_class(k);
            if let Some(e) = entries.iter().find(|e| catalog.get(e.circuit).class != class) {
                return Err(Error::ClassMismatch {
                    expected: class.to_string(),
                    found: e.id.clone(),
                });
            }
            nodes.push(NodeLibrary {
                node: name.to_string(),
                class,
                entries,
            });
        }
        Ok(ReducedLibrary { nodes })
    }
}

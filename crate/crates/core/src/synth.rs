//! Ground-truth hardware cost: the configuration's circuits stitched into
//! one flat netlist, simplified as a whole, then costed.

use crate::accel::{AccelGraph, Configuration, NodeKind};
use crate::circgen::Catalog;
use crate::error::Result;
use crate::netlist::{simplify, CostTable, GateKind, GateNetlist, HwMetrics, NetId, NetlistBuilder};

/// Flat netlist of `graph` under `config`.
///
/// Ports are the graph inputs (by name) and one output `out` carrying the
/// unclamped output value. Shifts and zero-extension are pure wiring.
pub fn compose(graph: &AccelGraph, config: &Configuration, catalog: &Catalog) -> Result<GateNetlist> {
    config.validate(graph, catalog)?;
    let netlists: Vec<&GateNetlist> = config.0.iter().map(|&i| &catalog.get(i).netlist).collect();
    Ok(compose_netlists(graph, &netlists))
}

/// [`compose`] over explicit per-operation netlists.
pub fn compose_netlists(graph: &AccelGraph, netlists: &[&GateNetlist]) -> GateNetlist {
    let mut nb = NetlistBuilder::new();
    let mut values: Vec<Vec<NetId>> = Vec::with_capacity(graph.nodes().len());
    let mut zero: Option<NetId> = None;
    let mut one: Option<NetId> = None;
    let mut const_net = |nb: &mut NetlistBuilder, bit: bool| -> NetId {
        let slot = if bit { &mut one } else { &mut zero };
        *slot.get_or_insert_with(|| nb.gate(if bit { GateKind::Const1 } else { GateKind::Const0 }, &[]))
    };
    let mut k = 0;
    let mut out_bits = Vec::new();
    for node in graph.nodes() {
        let w = node.width as usize;
        let v: Vec<NetId> = match node.kind {
            NodeKind::Input => nb.input(&node.name, w),
            NodeKind::Const(c) => (0..w).map(|i| const_net(&mut nb, (c >> i) & 1 == 1)).collect(),
            NodeKind::Shl { src, amount } => {
                let s = values[src].clone();
                let a = amount as usize;
                (0..w)
                    .map(|i| match i.checked_sub(a).and_then(|j| s.get(j)) {
                        Some(&n) => n,
                        None => const_net(&mut nb, false),
                    })
                    .collect()
            }
            NodeKind::Shr { src, amount } => {
                let s = values[src].clone();
                (0..w)
                    .map(|i| s.get(i + amount as usize).copied().unwrap_or_else(|| const_net(&mut nb, false)))
                    .collect()
            }
            NodeKind::Op { class, a, b } => {
                let n = netlists[k];
                k += 1;
                let mut map: Vec<Option<NetId>> = vec![None; n.net_count() as usize];
                for (port, src, width) in [(0, a, class.a_width), (1, b, class.b_width)] {
                    let srcv = &values[src];
                    for (i, &bit) in n.inputs()[port].bits.iter().enumerate().take(width as usize) {
                        map[bit as usize] = Some(match srcv.get(i) {
                            Some(&s) => s,
                            None => const_net(&mut nb, false),
                        });
                    }
                }
                for g in n.gates() {
                    let fanin: Vec<NetId> = g.inputs().iter().map(|&f| map[f as usize].expect("topological order")).collect();
                    map[g.output as usize] = Some(nb.gate(g.kind, &fanin));
                }
                n.outputs()[0].bits.iter().map(|&b| map[b as usize].expect("driven output")).collect()
            }
            NodeKind::Output { src } => {
                out_bits = values[src].clone();
                Vec::new()
            }
        };
        values.push(v);
    }
    nb.output("out", out_bits);
    nb.finish().expect("composition of valid netlists is valid")
}

/// Area, delay and power of the simplified composition under the default
/// cost table and uniform inputs.
pub fn hw_cost(graph: &AccelGraph, config: &Configuration, catalog: &Catalog) -> Result<HwMetrics> {
    let flat = simplify(&compose(graph, config, catalog)?);
    Ok(flat.metrics(&CostTable::default(), None))
}

/// Sum of the stand-alone areas of the assigned circuits.
pub fn component_area(config: &Configuration, catalog: &Catalog) -> f64 {
    config.0.iter().map(|&i| catalog.get(i).characterization.area).sum()
}

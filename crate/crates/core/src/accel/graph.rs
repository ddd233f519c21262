use crate::circgen::{Catalog, OpClass};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NodeKind {
    /// Primary input: a neighbourhood pixel or a runtime coefficient.
    Input,
    Const(u64),
    /// Left shift, truncated to the node width.
    Shl { src: NodeId, amount: u32 },
    Shr { src: NodeId, amount: u32 },
    /// Approximable arithmetic operation; narrower operands are zero-extended.
    Op { class: OpClass, a: NodeId, b: NodeId },
    /// Result pixel. The software model clamps the value to the node width;
    /// the clamp is not part of the hardware.
    Output { src: NodeId },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
    pub width: u32,
}

/// Accelerator dataflow graph. Nodes are stored in evaluation order: every
/// source index is smaller than the index of its consumer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccelGraph {
    name: String,
    nodes: Vec<Node>,
    op_nodes: Vec<NodeId>,
    inputs: Vec<NodeId>,
    output: NodeId,
}

/// Builder enforcing evaluation order and width consistency.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<Node>,
}

impl GraphBuilder {
    pub fn new() -> GraphBuilder {
        GraphBuilder::default()
    }

    fn push(&mut self, name: &str, kind: NodeKind, width: u32) -> NodeId {
        self.nodes.push(Node {
            name: name.to_string(),
            kind,
            width,
        });
        self.nodes.len() - 1
    }

    pub fn width(&self, id: NodeId) -> u32 {
        self.nodes[id].width
    }

    pub fn input(&mut self, name: &str, width: u32) -> NodeId {
        self.push(name, NodeKind::Input, width)
    }

    pub fn constant(&mut self, name: &str, value: u64, width: u32) -> NodeId {
        self.push(name, NodeKind::Const(value), width)
    }

    /// Left shift; the result keeps all bits unless `width` is given.
    pub fn shl(&mut self, name: &str, src: NodeId, amount: u32, width: Option<u32>) -> NodeId {
        let w = width.unwrap_or(self.width(src) + amount);
        self.push(name, NodeKind::Shl { src, amount }, w)
    }

    pub fn shr(&mut self, name: &str, src: NodeId, amount: u32) -> NodeId {
        let w = self.width(src).saturating_sub(amount).max(1);
        self.push(name, NodeKind::Shr { src, amount }, w)
    }

    pub fn op(&mut self, name: &str, class: OpClass, a: NodeId, b: NodeId) -> NodeId {
        self.push(name, NodeKind::Op { class, a, b }, class.out_width)
    }

    pub fn output(&mut self, name: &str, src: NodeId, width: u32) -> NodeId {
        self.push(name, NodeKind::Output { src }, width)
    }

    pub fn finish(self, name: &str) -> Result<AccelGraph> {
        AccelGraph::new(name, self.nodes)
    }
}

impl AccelGraph {
    pub fn new(name: &str, nodes: Vec<Node>) -> Result<AccelGraph> {
        let bad = |m: String| Err(Error::InvalidParameter(format!("graph `{name}`: {m}")));
        let mut op_nodes = Vec::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut names = std::collections::HashSet::new();
        for (i, n) in nodes.iter().enumerate() {
            if !names.insert(n.name.as_str()) {
                return bad(format!("duplicate node name `{}`", n.name));
            }
            if n.width == 0 || n.width > 64 {
                return bad(format!("node `{}` has width {}", n.name, n.width));
            }
            let src_ok = |s: NodeId| s < i;
            match &n.kind {
                NodeKind::Input => inputs.push(i),
                NodeKind::Const(v) => {
                    if n.width < 64 && *v >> n.width != 0 {
                        return bad(format!("constant `{}` exceeds its width", n.name));
                    }
                }
                NodeKind::Shl { src, .. } | NodeKind::Shr { src, .. } | NodeKind::Output { src } => {
                    if !src_ok(*src) {
                        return bad(format!("node `{}` reads a later node", n.name));
                    }
                    if let NodeKind::Output { .. } = n.kind {
                        outputs.push(i);
                    }
                }
                NodeKind::Op { class, a, b } => {
                    if !src_ok(*a) || !src_ok(*b) {
                        return bad(format!("node `{}` reads a later node", n.name));
                    }
                    if nodes[*a].width > class.a_width || nodes[*b].width > class.b_width {
                        return bad(format!(
                            "operands of `{}` ({} and {} bits) exceed class {class}",
                            n.name, nodes[*a].width, nodes[*b].width
                        ));
                    }
                    if n.width != class.out_width {
                        return bad(format!("node `{}` width differs from its class", n.name));
                    }
                    op_nodes.push(i);
                }
            }
        }
        if outputs.len() != 1 {
            return bad(format!("expected one output node, found {}", outputs.len()));
        }
        Ok(AccelGraph {
            name: name.to_string(),
            nodes,
            op_nodes,
            inputs,
            output: outputs[0],
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    /// Approximable operation nodes in evaluation order; configurations are
    /// indexed by position in this list.
    pub fn op_nodes(&self) -> &[NodeId] {
        &self.op_nodes
    }

    pub fn op_count(&self) -> usize {
        self.op_nodes.len()
    }

    pub fn op_class(&self, k: usize) -> OpClass {
        match self.nodes[self.op_nodes[k]].kind {
            NodeKind::Op { class, .. } => class,
            _ => unreachable!("op_nodes only lists operation nodes"),
        }
    }

    pub fn op_name(&self, k: usize) -> &str {
        &self.nodes[self.op_nodes[k]].name
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn output_source(&self) -> NodeId {
        match self.nodes[self.output].kind {
            NodeKind::Output { src } => src,
            _ => unreachable!("output is an output node"),
        }
    }

    /// Number of operation nodes per class.
    pub fn class_counts(&self) -> std::collections::BTreeMap<OpClass, usize> {
        let mut m = std::collections::BTreeMap::new();
        for k in 0..self.op_count() {
            *m.entry(self.op_class(k)).or_insert(0) += 1;
        }
        m
    }
}

/// Assignment of one catalog circuit (by catalog index) to every operation
/// node, in [`AccelGraph::op_nodes`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration(pub Vec<usize>);

impl Configuration {
    /// Checks totality and class consistency.
    pub fn validate(&self, graph: &AccelGraph, catalog: &Catalog) -> Result<()> {
        if self.0.len() != graph.op_count() {
            return Err(Error::InvalidConfiguration(format!(
                "{} circuits for {} operation nodes",
                self.0.len(),
                graph.op_count()
            )));
        }
        for (k, &ci) in self.0.iter().enumerate() {
            if ci >= catalog.len() {
                return Err(Error::UnknownCircuit(format!("#{ci}")));
            }
            let c = catalog.get(ci);
            if c.class != graph.op_class(k) {
                return Err(Error::InvalidConfiguration(format!(
                    "node `{}` needs {} but `{}` is {}",
                    graph.op_name(k),
                    graph.op_class(k),
                    c.id,
                    c.class
                )));
            }
        }
        Ok(())
    }

    /// All-exact configuration.
    pub fn exact(graph: &AccelGraph, catalog: &Catalog) -> Result<Configuration> {
        (0..graph.op_count())
            .map(|k| {
                let class = graph.op_class(k);
                catalog
                    .exact_for(class)
                    .ok_or_else(|| Error::UnknownCircuit(format!("exact {class} circuit")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Configuration)
    }

    pub fn from_ids(ids: &[impl AsRef<str>], catalog: &Catalog) -> Result<Configuration> {
        ids.iter()
            .map(|id| catalog.resolve(id.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Configuration)
    }

    pub fn ids<'c>(&self, catalog: &'c Catalog) -> Vec<&'c str> {
        self.0.iter().map(|&i| catalog.get(i).id.as_str()).collect()
    }
}

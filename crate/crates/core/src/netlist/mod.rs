//! Combinational gate-level netlists.
//!
//! A [`GateNetlist`] is the ground-truth representation of every circuit in
//! the toolkit: library components, composed accelerators, and the inputs to
//! hardware costing. Nets are dense integer ids; each net is driven by
//! exactly one primary input bit or one gate output. Gates are always stored
//! in topological order.

mod cost;
mod eval;
mod simplify;
mod text;

pub use cost::{CostTable, HwMetrics};
pub use eval::PlaneEvaluator;
pub use simplify::simplify;

use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt;

pub type NetId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Or,
    Xor,
    Nand,
    Nor,
    Xnor,
    Not,
    Buf,
    Const0,
    Const1,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::And,
        GateKind::Or,
        GateKind::Xor,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
        GateKind::Const0,
        GateKind::Const1,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Const0 | GateKind::Const1 => 0,
            GateKind::Not | GateKind::Buf => 1,
            _ => 2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Xor => "XOR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Bitwise evaluation over 64 lanes.
    #[inline]
    pub fn eval_planes(self, a: u64, b: u64) -> u64 {
        match self {
            GateKind::And => a & b,
            GateKind::Or => a | b,
            GateKind::Xor => a ^ b,
            GateKind::Nand => !(a & b),
            GateKind::Nor => !(a | b),
            GateKind::Xnor => !(a ^ b),
            GateKind::Not => !a,
            GateKind::Buf => a,
            GateKind::Const0 => 0,
            GateKind::Const1 => u64::MAX,
        }
    }

    /// Truth table on single bits.
    pub fn eval_bool(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::And => a && b,
            GateKind::Or => a || b,
            GateKind::Xor => a != b,
            GateKind::Nand => !(a && b),
            GateKind::Nor => !(a || b),
            GateKind::Xnor => a == b,
            GateKind::Not => !a,
            GateKind::Buf => a,
            GateKind::Const0 => false,
            GateKind::Const1 => true,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate. Unused fanin slots are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub fanin: [NetId; 2],
    pub output: NetId,
}

impl Gate {
    pub fn new(kind: GateKind, fanin: &[NetId], output: NetId) -> Gate {
        let mut f = [0; 2];
        f[..fanin.len()].copy_from_slice(fanin);
        Gate {
            kind,
            fanin: f,
            output,
        }
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.fanin[..self.kind.arity()]
    }
}

/// A named group of single-bit ports, least significant bit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub bits: Vec<NetId>,
}

impl Port {
    pub fn new(name: impl Into<String>, bits: Vec<NetId>) -> Port {
        Port {
            name: name.into(),
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateNetlist {
    inputs: Vec<Port>,
    outputs: Vec<Port>,
    gates: Vec<Gate>,
    net_count: u32,
}

impl GateNetlist {
    /// Validates and topologically orders a netlist. Gates already in
    /// topological order keep their relative order.
    pub fn new(inputs: Vec<Port>, outputs: Vec<Port>, gates: Vec<Gate>) -> Result<GateNetlist> {
        let mut names = HashSet::new();
        for p in &inputs {
            if !names.insert(p.name.as_str()) {
                return Err(Error::InvalidNetlist(format!("duplicate input port `{}`", p.name)));
            }
        }
        names.clear();
        for p in &outputs {
            if !names.insert(p.name.as_str()) {
                return Err(Error::InvalidNetlist(format!("duplicate output port `{}`", p.name)));
            }
        }
        for p in inputs.iter().chain(&outputs) {
            if p.bits.is_empty() || p.bits.len() > 64 {
                return Err(Error::InvalidNetlist(format!(
                    "port `{}` has width {} (must be 1..=64)",
                    p.name,
                    p.bits.len()
                )));
            }
        }

        let max_net = inputs
            .iter()
            .chain(&outputs)
            .flat_map(|p| p.bits.iter().copied())
            .chain(gates.iter().flat_map(|g| g.inputs().iter().copied().chain([g.output])))
            .max()
            .map_or(0, |m| m + 1);
        let n = max_net as usize;

        // driver[net]: None = undriven, Some(None) = primary input, Some(Some(g)) = gate g
        let mut driver: Vec<Option<Option<usize>>> = vec![None; n];
        for p in &inputs {
            for &b in &p.bits {
                if driver[b as usize].is_some() {
                    return Err(Error::InvalidNetlist(format!("net n{b} has multiple drivers")));
                }
                driver[b as usize] = Some(None);
            }
        }
        for (gi, g) in gates.iter().enumerate() {
            if g.kind.arity() < 2 && g.fanin[g.kind.arity()..].iter().any(|&f| f != 0) {
                return Err(Error::InvalidNetlist(format!(
                    "gate driving n{} has too many fanins for {}",
                    g.output, g.kind
                )));
            }
            let o = g.output as usize;
            if driver[o].is_some() {
                return Err(Error::InvalidNetlist(format!("net n{o} has multiple drivers")));
            }
            driver[o] = Some(Some(gi));
        }
        for g in &gates {
            for &f in g.inputs() {
                if driver[f as usize].is_none() {
                    return Err(Error::InvalidNetlist(format!(
                        "net n{f} feeding gate n{} is undriven",
                        g.output
                    )));
                }
            }
        }
        for p in &outputs {
            for &b in &p.bits {
                if driver[b as usize].is_none() {
                    return Err(Error::InvalidNetlist(format!(
                        "output `{}` bit n{b} is undriven",
                        p.name
                    )));
                }
            }
        }

        // iterative DFS post-order; 0 = new, 1 = on stack, 2 = done
        let mut state = vec![0u8; gates.len()];
        let mut order = Vec::with_capacity(gates.len());
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in 0..gates.len() {
            if state[root] != 0 {
                continue;
            }
            stack.push((root, 0));
            state[root] = 1;
            while let Some(&mut (gi, ref mut next)) = stack.last_mut() {
                let fanin = gates[gi].inputs();
                if *next < fanin.len() {
                    let f = fanin[*next];
                    *next += 1;
                    if let Some(Some(dep)) = driver[f as usize] {
                        match state[dep] {
                            0 => {
                                state[dep] = 1;
                                stack.push((dep, 0));
                            }
                            1 => {
                                return Err(Error::InvalidNetlist(format!(
                                    "combinational cycle through net n{f}"
                                )))
                            }
                            _ => {}
                        }
                    }
                } else {
                    state[gi] = 2;
                    order.push(gi);
                    stack.pop();
                }
            }
        }
        let gates = order.into_iter().map(|i| gates[i]).collect();

        Ok(GateNetlist {
            inputs,
            outputs,
            gates,
            net_count: max_net,
        })
    }

    pub fn inputs(&self) -> &[Port] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Port] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn net_count(&self) -> u32 {
        self.net_count
    }

    pub fn input(&self, name: &str) -> Option<&Port> {
        self.inputs.iter().find(|p| p.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&Port> {
        self.outputs.iter().find(|p| p.name == name)
    }

    pub fn input_bits(&self) -> usize {
        self.inputs.iter().map(Port::width).sum()
    }

    pub fn output_bits(&self) -> usize {
        self.outputs.iter().map(Port::width).sum()
    }

    /// Number of gates excluding constants and buffers.
    pub fn logic_gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| g.kind.arity() > 0 && g.kind != GateKind::Buf)
            .count()
    }

    /// Number of two-input gates.
    pub fn two_input_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.arity() == 2).count()
    }

    /// Replaces an input port group by a constant value. The port is removed
    /// and its bits become constant gates.
    pub fn with_constant_input(&self, name: &str, value: u64) -> Result<GateNetlist> {
        let idx = self
            .inputs
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| Error::PortWidth {
                port: name.to_string(),
                msg: "no such input port".into(),
            })?;
        let port = &self.inputs[idx];
        check_fits(port, value)?;
        let mut gates: Vec<Gate> = port
            .bits
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let kind = if (value >> i) & 1 == 1 {
                    GateKind::Const1
                } else {
                    GateKind::Const0
                };
                Gate::new(kind, &[], b)
            })
            .collect();
        gates.extend_from_slice(&self.gates);
        let mut inputs = self.inputs.clone();
        inputs.remove(idx);
        GateNetlist::new(inputs, self.outputs.clone(), gates)
    }

    /// Checks the structural invariants (single driver, acyclic, arity,
    /// driven outputs) of an already-constructed netlist.
    pub fn check_invariants(&self) -> Result<()> {
        let rebuilt = GateNetlist::new(self.inputs.clone(), self.outputs.clone(), self.gates.clone())?;
        if rebuilt.gates != self.gates {
            return Err(Error::InvalidNetlist("gates are not in topological order".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_fits(port: &Port, value: u64) -> Result<()> {
    if port.width() < 64 && value >> port.width() != 0 {
        return Err(Error::PortWidth {
            port: port.name.clone(),
            msg: format!("value {value} does not fit in {} bits", port.width()),
        });
    }
    Ok(())
}

/// Incremental netlist construction in topological order.
#[derive(Debug, Default)]
pub struct NetlistBuilder {
    inputs: Vec<Port>,
    outputs: Vec<Port>,
    gates: Vec<Gate>,
    next: NetId,
    const0: Option<NetId>,
    const1: Option<NetId>,
}

impl NetlistBuilder {
    pub fn new() -> NetlistBuilder {
        NetlistBuilder::default()
    }

    /// Declares an input group; returns its nets, least significant first.
    pub fn input(&mut self, name: &str, width: usize) -> Vec<NetId> {
        let bits: Vec<NetId> = (0..width).map(|_| self.fresh()).collect();
        self.inputs.push(Port::new(name, bits.clone()));
        bits
    }

    pub fn output(&mut self, name: &str, bits: Vec<NetId>) {
        self.outputs.push(Port::new(name, bits));
    }

    fn fresh(&mut self) -> NetId {
        let n = self.next;
        self.next += 1;
        n
    }

    pub fn gate(&mut self, kind: GateKind, fanin: &[NetId]) -> NetId {
        debug_assert_eq!(fanin.len(), kind.arity());
        let out = self.fresh();
        self.gates.push(Gate::new(kind, fanin, out));
        out
    }

    pub fn and(&mut self, a: NetId, b: NetId) -> NetId {
        self.gate(GateKind::And, &[a, b])
    }

    pub fn or(&mut self, a: NetId, b: NetId) -> NetId {
        self.gate(GateKind::Or, &[a, b])
    }

    pub fn xor(&mut self, a: NetId, b: NetId) -> NetId {
        self.gate(GateKind::Xor, &[a, b])
    }

    pub fn not(&mut self, a: NetId) -> NetId {
        self.gate(GateKind::Not, &[a])
    }

    pub fn buf(&mut self, a: NetId) -> NetId {
        self.gate(GateKind::Buf, &[a])
    }

    /// Shared constant-0 net.
    pub fn zero(&mut self) -> NetId {
        match self.const0 {
            Some(n) => n,
            None => {
                let n = self.gate(GateKind::Const0, &[]);
                self.const0 = Some(n);
                n
            }
        }
    }

    /// Shared constant-1 net.
    pub fn one(&mut self) -> NetId {
        match self.const1 {
            Some(n) => n,
            None => {
                let n = self.gate(GateKind::Const1, &[]);
                self.const1 = Some(n);
                n
            }
        }
    }

    /// Full adder built from 2 XOR, 2 AND and 1 OR; returns (sum, carry).
    pub fn full_adder(&mut self, a: NetId, b: NetId, c: NetId) -> (NetId, NetId) {
        let p = self.xor(a, b);
        let s = self.xor(p, c);
        let g = self.and(a, b);
        let t = self.and(c, p);
        let co = self.or(g, t);
        (s, co)
    }

    /// Half adder; returns (sum, carry).
    pub fn half_adder(&mut self, a: NetId, b: NetId) -> (NetId, NetId) {
        let s = self.xor(a, b);
        let c = self.and(a, b);
        (s, c)
    }

    pub fn finish(self) -> Result<GateNetlist> {
        GateNetlist::new(self.inputs, self.outputs, self.gates)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles_and_double_drivers() {
        let a = Port::new("a", vec![0]);
        let y = Port::new("y", vec![2]);
        let cyc = vec![
            Gate::new(GateKind::And, &[0, 2], 1),
            Gate::new(GateKind::Not, &[1], 2),
        ];
        assert!(GateNetlist::new(vec![a.clone()], vec![y.clone()], cyc).is_err());
        let dup = vec![
            Gate::new(GateKind::Not, &[0], 2),
            Gate::new(GateKind::Buf, &[0], 2),
        ];
        assert!(GateNetlist::new(vec![a.clone()], vec![y.clone()], dup).is_err());
        let undriven = vec![Gate::new(GateKind::And, &[0, 5], 2)];
        assert!(GateNetlist::new(vec![a], vec![y], undriven).is_err());
    }

    #[test]
    fn sorts_gates_topologically() {
        let a = Port::new("a", vec![0]);
        let y = Port::new("y", vec![2]);
        let gates = vec![
            Gate::new(GateKind::Not, &[1], 2),
            Gate::new(GateKind::Buf, &[0], 1),
        ];
        let n = GateNetlist::new(vec![a], vec![y], gates).unwrap();
        assert_eq!(n.gates()[0].output, 1);
        n.check_invariants().unwrap();
    }

    #[test]
    fn ripple_adder_gate_count() {
        let n = crate::circgen::ripple_carry_adder(8);
        assert_eq!(n.two_input_gate_count(), 40);
        assert_eq!(
            n.gates().iter().filter(|g| g.kind == GateKind::Xor).count(),
            16
        );
    }
}

use super::{GateKind, GateNetlist};
use serde::{Deserialize, Serialize};

/// Relative per-gate-kind area, switching energy and delay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub area: [f64; 10],
    pub energy: [f64; 10],
    pub delay: [f64; 10],
}

impl Default for CostTable {
    /// NOT/BUF 1, AND/OR/NAND/NOR 2, XOR/XNOR 3, constants 0; unit delay
    /// (constants 0); energy equal to area.
    fn default() -> Self {
        let mut area = [0.0; 10];
        let mut delay = [0.0; 10];
        for k in GateKind::ALL {
            area[k.index()] = match k {
                GateKind::Not | GateKind::Buf => 1.0,
                GateKind::And | GateKind::Or | GateKind::Nand | GateKind::Nor => 2.0,
                GateKind::Xor | GateKind::Xnor => 3.0,
                GateKind::Const0 | GateKind::Const1 => 0.0,
            };
            delay[k.index()] = if k.arity() == 0 { 0.0 } else { 1.0 };
        }
        CostTable {
            area,
            energy: area,
            delay,
        }
    }
}

/// Area, critical-path delay and switching-energy proxy of one netlist.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HwMetrics {
    pub area: f64,
    pub delay: f64,
    pub power: f64,
}

impl GateNetlist {
    pub fn area(&self, table: &CostTable) -> f64 {
        self.gates.iter().map(|g| table.area[g.kind.index()]).sum()
    }

    /// Longest weighted path from any input to any output.
    pub fn depth(&self, table: &CostTable) -> f64 {
        let mut arrival = vec![0.0f64; self.net_count as usize];
        for g in &self.gates {
            let t = g
                .inputs()
                .iter()
                .map(|&f| arrival[f as usize])
                .fold(0.0, f64::max);
            arrival[g.output as usize] = t + table.delay[g.kind.index()];
        }
        self.outputs
            .iter()
            .flat_map(|p| p.bits.iter())
            .map(|&b| arrival[b as usize])
            .fold(0.0, f64::max)
    }

    /// Switching-energy proxy: sum over gates of energy times the toggle
    /// probability `2p(1-p)` of the gate output, with signal probabilities
    /// propagated under the independent-signal approximation.
    ///
    /// `input_probs` gives P(bit = 1) for every input bit in port order;
    /// `None` means 0.5 everywhere.
    pub fn energy_proxy(&self, table: &CostTable, input_probs: Option<&[f64]>) -> f64 {
        let mut p = vec![0.0f64; self.net_count as usize];
        let mut k = 0;
        for port in &self.inputs {
            for &b in &port.bits {
                p[b as usize] = input_probs.map_or(0.5, |v| v[k]);
                k += 1;
            }
        }
        let mut energy = 0.0;
        for g in &self.gates {
            let a = p[g.fanin[0] as usize];
            let b = p[g.fanin[1] as usize];
            let q = match g.kind {
                GateKind::And => a * b,
                GateKind::Or => 1.0 - (1.0 - a) * (1.0 - b),
                GateKind::Xor => a * (1.0 - b) + b * (1.0 - a),
                GateKind::Nand => 1.0 - a * b,
                GateKind::Nor => (1.0 - a) * (1.0 - b),
                GateKind::Xnor => 1.0 - (a * (1.0 - b) + b * (1.0 - a)),
                GateKind::Not => 1.0 - a,
                GateKind::Buf => a,
                GateKind::Const0 => 0.0,
                GateKind::Const1 => 1.0,
            };
            p[g.output as usize] = q;
            energy += table.energy[g.kind.index()] * 2.0 * q * (1.0 - q);
        }
        energy
    }

    pub fn metrics(&self, table: &CostTable, input_probs: Option<&[f64]>) -> HwMetrics {
        HwMetrics {
            area: self.area(table),
            delay: self.depth(table),
            power: self.energy_proxy(table, input_probs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn wire_only_netlist_is_free() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x", 4);
        b.output("y", x);
        let n = b.finish().unwrap();
        let t = CostTable::default();
        assert_eq!(n.area(&t), 0.0);
        assert_eq!(n.depth(&t), 0.0);
        assert_eq!(n.energy_proxy(&t, None), 0.0);
    }

    #[test]
    fn adder_costs() {
        let n = crate::circgen::ripple_carry_adder(8);
        let t = CostTable::default();
        // 8 full adders of 2 XOR + 2 AND + 1 OR
        assert_eq!(n.area(&t), 8.0 * (3.0 + 3.0 + 2.0 + 2.0 + 2.0));
        let s = simplify(&n);
        // bit 0 collapses to a half adder
        assert_eq!(s.area(&t), 5.0 + 7.0 * 12.0);
        assert!(s.depth(&t) >= 8.0);
    }

    #[test]
    fn energy_of_and_gate() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x", 1);
        let y = b.input("y", 1);
        let o = b.and(x[0], y[0]);
        b.output("o", vec![o]);
        let n = b.finish().unwrap();
        let t = CostTable::default();
        // p = 0.25, toggle = 2 * 0.25 * 0.75
        assert!((n.energy_proxy(&t, None) - 2.0 * 0.375).abs() < 1e-12);
        assert_eq!(n.energy_proxy(&t, Some(&[1.0, 1.0])), 0.0);
    }
}

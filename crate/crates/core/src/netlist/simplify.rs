//! Structural simplification to a fixed point: constant propagation, buffer
//! collapsing, identity/annihilator rewrites, structural hashing and
//! dead-gate elimination.

use super::{Gate, GateKind, GateNetlist, NetId, Port};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Lit {
    Zero,
    One,
    Net(NetId),
}

struct Rebuild {
    gates: Vec<Gate>,
    next: NetId,
    hashed: HashMap<(GateKind, NetId, NetId), NetId>,
    /// new net -> net it inverts, for nets driven by NOT
    inverted: HashMap<NetId, NetId>,
}

impl Rebuild {
    fn emit(&mut self, kind: GateKind, a: NetId, b: NetId) -> NetId {
        let key = match kind.arity() {
            2 if a > b => (kind, b, a),
            2 => (kind, a, b),
            1 => (kind, a, 0),
            _ => (kind, 0, 0),
        };
        if let Some(&n) = self.hashed.get(&key) {
            return n;
        }
        let out = self.next;
        self.next += 1;
        self.gates
            .push(Gate::new(kind, &[key.1, key.2][..kind.arity()], out));
        self.hashed.insert(key, out);
        if kind == GateKind::Not {
            self.inverted.insert(out, a);
        }
        out
    }

    fn not(&mut self, x: Lit) -> Lit {
        match x {
            Lit::Zero => Lit::One,
            Lit::One => Lit::Zero,
            Lit::Net(n) => match self.inverted.get(&n) {
                Some(&m) => Lit::Net(m),
                None => Lit::Net(self.emit(GateKind::Not, n, 0)),
            },
        }
    }

    fn complementary(&self, a: NetId, b: NetId) -> bool {
        self.inverted.get(&a) == Some(&b) || self.inverted.get(&b) == Some(&a)
    }

    fn binary(&mut self, kind: GateKind, x: Lit, y: Lit) -> Lit {
        use GateKind::*;
        // Move a constant operand (if any) into `y`.
        let (x, y) = match x {
            Lit::Zero | Lit::One => (y, x),
            _ => (x, y),
        };
        match (kind, y) {
            (And, Lit::Zero) | (Nor, Lit::One) => return Lit::Zero,
            (Or, Lit::One) | (Nand, Lit::Zero) => return Lit::One,
            (And, Lit::One) | (Or, Lit::Zero) | (Xor, Lit::Zero) | (Xnor, Lit::One) => return x,
            (Xor, Lit::One) | (Xnor, Lit::Zero) | (Nand, Lit::One) | (Nor, Lit::Zero) => {
                return self.not(x)
            }
            _ => {}
        }
        let (Lit::Net(a), Lit::Net(b)) = (x, y) else {
            unreachable!("constant pairs are folded above")
        };
        if a == b {
            return match kind {
                And | Or => x,
                Xor => Lit::Zero,
                Xnor => Lit::One,
                Nand | Nor => self.not(x),
                _ => unreachable!(),
            };
        }
        if self.complementary(a, b) {
            return match kind {
                And | Nor | Xnor => Lit::Zero,
                Or | Nand | Xor => Lit::One,
                _ => unreachable!(),
            };
        }
        Lit::Net(self.emit(kind, a, b))
    }
}

fn rebuild(n: &GateNetlist) -> GateNetlist {
    let mut map: Vec<Lit> = vec![Lit::Zero; n.net_count as usize];
    let mut next: NetId = 0;
    let inputs: Vec<Port> = n
        .inputs
        .iter()
        .map(|p| {
            let bits = p
                .bits
                .iter()
                .map(|&b| {
                    map[b as usize] = Lit::Net(next);
                    next += 1;
                    next - 1
                })
                .collect();
            Port::new(p.name.clone(), bits)
        })
        .collect();
    let mut rb = Rebuild {
        gates: Vec::with_capacity(n.gates.len()),
        next,
        hashed: HashMap::new(),
        inverted: HashMap::new(),
    };
    for g in &n.gates {
        let x = map[g.fanin[0] as usize];
        let y = map[g.fanin[1] as usize];
        let lit = match g.kind {
            GateKind::Const0 => Lit::Zero,
            GateKind::Const1 => Lit::One,
            GateKind::Buf => x,
            GateKind::Not => rb.not(x),
            k => rb.binary(k, x, y),
        };
        map[g.output as usize] = lit;
    }
    let outputs: Vec<Port> = n
        .outputs
        .iter()
        .map(|p| {
            let bits = p
                .bits
                .iter()
                .map(|&b| match map[b as usize] {
                    Lit::Net(m) => m,
                    Lit::Zero => rb.emit(GateKind::Const0, 0, 0),
                    Lit::One => rb.emit(GateKind::Const1, 0, 0),
                })
                .collect();
            Port::new(p.name.clone(), bits)
        })
        .collect();
    eliminate_dead(inputs, outputs, rb.gates)
}

/// Removes gates with no path to an output and renumbers nets densely
/// (inputs first, then gate outputs in order).
fn eliminate_dead(inputs: Vec<Port>, outputs: Vec<Port>, gates: Vec<Gate>) -> GateNetlist {
    let net_count = gates
        .iter()
        .map(|g| g.output + 1)
        .chain(inputs.iter().flat_map(|p| p.bits.iter().map(|b| b + 1)))
        .max()
        .unwrap_or(0) as usize;
    let mut live = vec![false; net_count];
    for p in &outputs {
        for &b in &p.bits {
            live[b as usize] = true;
        }
    }
    let mut keep = vec![false; gates.len()];
    for (i, g) in gates.iter().enumerate().rev() {
        if live[g.output as usize] {
            keep[i] = true;
            for &f in g.inputs() {
                live[f as usize] = true;
            }
        }
    }
    let mut remap: Vec<NetId> = vec![NetId::MAX; net_count];
    let mut next: NetId = 0;
    let inputs: Vec<Port> = inputs
        .into_iter()
        .map(|p| {
            let bits = p
                .bits
                .iter()
                .map(|&b| {
                    remap[b as usize] = next;
                    next += 1;
                    next - 1
                })
                .collect();
            Port::new(p.name, bits)
        })
        .collect();
    let mut kept = Vec::new();
    for (g, _) in gates.iter().zip(&keep).filter(|(_, &k)| k) {
        let fanin: Vec<NetId> = g.inputs().iter().map(|&f| remap[f as usize]).collect();
        remap[g.output as usize] = next;
        kept.push(Gate::new(g.kind, &fanin, next));
        next += 1;
    }
    let outputs = outputs
        .into_iter()
        .map(|p| {
            let bits = p.bits.iter().map(|&b| remap[b as usize]).collect();
            Port::new(p.name, bits)
        })
        .collect();
    GateNetlist {
        inputs,
        outputs,
        gates: kept,
        net_count: next,
    }
}

/// Simplifies a netlist to a fixed point of the rewrite rules. The result is
/// functionally equivalent and never has more gates than the input.
pub fn simplify(netlist: &GateNetlist) -> GateNetlist {
    let mut cur = rebuild(netlist);
    for _ in 0..32 {
        let next = rebuild(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::super::testutil::random_netlist;
    use super::super::*;
    use super::simplify;
    use crate::circgen::ripple_carry_adder;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn xor_with_zero_becomes_wire() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x", 1);
        let z = b.zero();
        let o = b.xor(x[0], z);
        b.output("o", vec![o]);
        let n = simplify(&b.finish().unwrap());
        assert!(n.gates().is_empty());
        assert_eq!(n.outputs()[0].bits, n.inputs()[0].bits);
    }

    #[test]
    fn adder_plus_zero_is_wiring() {
        let n = ripple_carry_adder(8).with_constant_input("b", 0).unwrap();
        let s = simplify(&n);
        assert_eq!(s.two_input_gate_count(), 0);
        assert_eq!(s.area(&CostTable::default()), 0.0);
        for a in 0..256 {
            assert_eq!(s.evaluate(&[a]).unwrap()[0], a);
        }
    }

    #[test]
    fn double_negation_and_complements() {
        let mut b = NetlistBuilder::new();
        let x = b.input("x", 1)[0];
        let y = b.input("y", 1)[0];
        let nx = b.not(x);
        let nnx = b.not(nx);
        let t = b.and(nnx, y);
        let k = b.and(x, nx);
        let o = b.or(t, k);
        b.output("o", vec![o]);
        let s = simplify(&b.finish().unwrap());
        assert_eq!(s.gates().len(), 1);
        assert_eq!(s.gates()[0].kind, GateKind::And);
    }

    #[test]
    fn random_netlists_equivalent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = random_netlist(&mut rng, 8, 120, true);
            let s = simplify(&n);
            s.check_invariants().unwrap();
            assert!(s.gates().len() <= n.gates().len());
            assert!(s.area(&CostTable::default()) <= n.area(&CostTable::default()));
            for _ in 0..1000 {
                let a = rng.gen_range(0..256);
                let b = rng.gen_range(0..256);
                assert_eq!(s.evaluate(&[a, b]).unwrap(), n.evaluate(&[a, b]).unwrap());
            }
            assert_eq!(simplify(&s), s, "not a fixed point");
        }
    }

    proptest! {
        #[test]
        fn exhaustive_equivalence_small(seed in any::<u64>(), gates in 1usize..80) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = random_netlist(&mut rng, 4, gates, seed % 2 == 0);
            let s = simplify(&n);
            for a in 0..16 {
                for b in 0..16 {
                    prop_assert_eq!(s.evaluate(&[a, b]).unwrap(), n.evaluate(&[a, b]).unwrap());
                }
            }
            prop_assert_eq!(simplify(&n), s);
        }
    }
}

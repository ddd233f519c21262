//! Raw (unsimplified) gate-level builders for the arithmetic families.

use super::{AbsDiffParams, AdderParams, LowPolicy, MulParams, OpClass};
use crate::netlist::{GateNetlist, NetId, NetlistBuilder};

/// Exact `width`-bit ripple-carry adder with inputs `a`, `b` and a
/// `width + 1`-bit output `s`.
pub fn ripple_carry_adder(width: usize) -> GateNetlist {
    let mut nb = NetlistBuilder::new();
    let a = nb.input("a", width);
    let b = nb.input("b", width);
    let mut carry = nb.zero();
    let mut s = Vec::with_capacity(width + 1);
    for i in 0..width {
        let (sum, co) = nb.full_adder(a[i], b[i], carry);
        s.push(sum);
        carry = co;
    }
    s.push(carry);
    nb.output("s", s);
    nb.finish().expect("ripple-carry adder is well formed")
}

struct Operands {
    a: Vec<NetId>,
    b: Vec<NetId>,
    zero: NetId,
}

impl Operands {
    fn declare(nb: &mut NetlistBuilder, class: OpClass) -> Operands {
        let a = nb.input("a", class.a_width as usize);
        let b = nb.input("b", class.b_width as usize);
        let zero = nb.zero();
        Operands { a, b, zero }
    }

    fn a(&self, i: u32) -> NetId {
        self.a.get(i as usize).copied().unwrap_or(self.zero)
    }

    fn b(&self, i: u32) -> NetId {
        self.b.get(i as usize).copied().unwrap_or(self.zero)
    }

    fn low_bit(&self, i: u32, policy: LowPolicy) -> NetId {
        match policy {
            LowPolicy::Zero => self.zero,
            LowPolicy::CopyA => self.a(i),
        }
    }
}

fn finish(mut nb: NetlistBuilder, mut y: Vec<NetId>, class: OpClass, zero: NetId) -> GateNetlist {
    y.resize(class.out_width as usize, zero);
    y.truncate(class.out_width as usize);
    nb.output("y", y);
    nb.finish().expect("generated netlist is well formed")
}

/// Ripple-carry adder whose result bits below the cut are replaced by the
/// low-bit policy and whose carry chain is severed at each boundary.
pub fn build_adder(class: OpClass, p: &AdderParams) -> GateNetlist {
    let mut nb = NetlistBuilder::new();
    let ops = Operands::declare(&mut nb, class);
    let w = class.operand_width();
    let mut y = Vec::with_capacity(w as usize + 1);
    let mut carry = ops.zero;
    for i in 0..w {
        if p.boundaries.contains(&i) {
            carry = ops.zero;
        }
        let (s, c) = nb.full_adder(ops.a(i), ops.b(i), carry);
        y.push(if i < p.cut { ops.low_bit(i, p.policy) } else { s });
        carry = c;
    }
    y.push(carry);
    finish(nb, y, class, ops.zero)
}

/// `|a - b|` as `a + !b + 1` followed by a conditional negation.
///
/// Borrow severing injects a fresh `+1` at each segment start. The
/// ones'-complement variant omits the increment of the negation step.
pub fn build_abs_diff(class: OpClass, p: &AbsDiffParams) -> GateNetlist {
    let mut nb = NetlistBuilder::new();
    let ops = Operands::declare(&mut nb, class);
    let w = class.operand_width();
    let one = nb.one();
    let mut diff = Vec::with_capacity(w as usize);
    let mut carry = one;
    for i in 0..w {
        if p.boundaries.contains(&i) {
            carry = one;
        }
        let nbit = nb.not(ops.b(i));
        let (s, c) = nb.full_adder(ops.a(i), nbit, carry);
        diff.push(s);
        carry = c;
    }
    let neg = nb.not(carry);
    let mut y = Vec::with_capacity(w as usize);
    let mut inc = if p.exact_negate { neg } else { ops.zero };
    for (i, d) in (0..w).zip(diff) {
        let t = nb.xor(d, neg);
        let (s, c) = nb.half_adder(t, inc);
        y.push(if i < p.cut { ops.low_bit(i, p.policy) } else { s });
        inc = c;
    }
    finish(nb, y, class, ops.zero)
}

/// Array multiplier accumulating one partial-product row at a time.
pub fn build_multiplier(class: OpClass, p: &MulParams) -> GateNetlist {
    let mut nb = NetlistBuilder::new();
    let ops = Operands::declare(&mut nb, class);
    let (wa, wb) = (class.a_width, class.b_width);
    let mut acc = vec![ops.zero; (wa + wb) as usize];
    for i in 0..wb {
        let mut carry = ops.zero;
        for j in 0..wa {
            let removed = i < p.h_break || i + j < p.v_break || j < p.trunc_a || i < p.trunc_b;
            let pp = if removed {
                ops.zero
            } else {
                nb.and(ops.a(j), ops.b(i))
            };
            let col = (i + j) as usize;
            let (s, c) = nb.full_adder(acc[col], pp, carry);
            acc[col] = s;
            carry = c;
        }
        acc[(i + wa) as usize] = carry;
    }
    finish(nb, acc, class, ops.zero)
}

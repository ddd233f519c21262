use super::{check_fits, GateNetlist};
use crate::error::{Error, Result};

impl GateNetlist {
    /// Evaluates the netlist on one input vector, one word per input group
    /// (in declaration order). Returns one word per output group.
    ///
    /// This is the bit-at-a-time reference evaluator; bulk simulation goes
    /// through [`PlaneEvaluator`].
    pub fn evaluate(&self, words: &[u64]) -> Result<Vec<u64>> {
        if words.len() != self.inputs.len() {
            return Err(Error::PortWidth {
                port: self
                    .inputs
                    .get(words.len())
                    .map_or_else(|| "<extra>".to_string(), |p| p.name.clone()),
                msg: format!(
                    "expected {} input words, got {}",
                    self.inputs.len(),
                    words.len()
                ),
            });
        }
        let mut nets = vec![false; self.net_count as usize];
        for (port, &w) in self.inputs.iter().zip(words) {
            check_fits(port, w)?;
            for (i, &b) in port.bits.iter().enumerate() {
                nets[b as usize] = (w >> i) & 1 == 1;
            }
        }
        for g in &self.gates {
            let a = nets[g.fanin[0] as usize];
            let b = nets[g.fanin[1] as usize];
            nets[g.output as usize] = g.kind.eval_bool(a, b);
        }
        Ok(self
            .outputs
            .iter()
            .map(|p| {
                p.bits
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &b)| acc | (u64::from(nets[b as usize]) << i))
            })
            .collect())
    }
}

/// Bit-sliced evaluator: 64 input vectors per call, one `u64` plane per
/// input bit. Holds a scratch buffer so repeated calls do not allocate.
#[derive(Debug, Clone)]
pub struct PlaneEvaluator<'a> {
    netlist: &'a GateNetlist,
    nets: Vec<u64>,
}

impl<'a> PlaneEvaluator<'a> {
    pub fn new(netlist: &'a GateNetlist) -> PlaneEvaluator<'a> {
        PlaneEvaluator {
            netlist,
            nets: vec![0; netlist.net_count as usize],
        }
    }

    pub fn netlist(&self) -> &'a GateNetlist {
        self.netlist
    }

    /// `inputs` holds the planes of all input bits, group by group, least
    /// significant first; `outputs` receives the output planes in the same
    /// layout.
    #[inline]
    pub fn eval(&mut self, inputs: &[u64], outputs: &mut [u64]) {
        let n = self.netlist;
        debug_assert_eq!(inputs.len(), n.input_bits());
        debug_assert_eq!(outputs.len(), n.output_bits());
        let nets = &mut self.nets;
        let mut k = 0;
        for p in &n.inputs {
            for &b in &p.bits {
                nets[b as usize] = inputs[k];
                k += 1;
            }
        }
        for g in &n.gates {
            let a = nets[g.fanin[0] as usize];
            let b = nets[g.fanin[1] as usize];
            nets[g.output as usize] = g.kind.eval_planes(a, b);
        }
        let mut k = 0;
        for p in &n.outputs {
            for &b in &p.bits {
                outputs[k] = nets[b as usize];
                k += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::random_netlist;
    use super::super::*;
    use crate::bits::{planes_to_values, values_to_planes};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_gate(kind: GateKind) -> GateNetlist {
        let mut b = NetlistBuilder::new();
        let x = b.input("x", 1);
        let y = b.input("y", 1);
        let o = b.gate(kind, &[x[0], y[0]]);
        b.output("o", vec![o]);
        b.finish().unwrap()
    }

    #[test]
    fn gate_truth_tables() {
        assert_eq!(single_gate(GateKind::And).evaluate(&[1, 1]).unwrap(), vec![1]);
        assert_eq!(single_gate(GateKind::And).evaluate(&[1, 0]).unwrap(), vec![0]);
        assert_eq!(single_gate(GateKind::Xor).evaluate(&[1, 1]).unwrap(), vec![0]);
        assert_eq!(single_gate(GateKind::Xor).evaluate(&[0, 1]).unwrap(), vec![1]);
        assert_eq!(single_gate(GateKind::Nor).evaluate(&[0, 0]).unwrap(), vec![1]);
    }

    #[test]
    fn width_mismatch_names_port() {
        let n = crate::circgen::ripple_carry_adder(8);
        let err = n.evaluate(&[256, 1]).unwrap_err().to_string();
        assert!(err.contains("`a`"), "{err}");
        assert!(n.evaluate(&[1]).is_err());
    }

    #[test]
    fn ripple_adder_exhaustive() {
        let n = crate::circgen::ripple_carry_adder(8);
        assert_eq!(n.evaluate(&[200, 100]).unwrap(), vec![300]);
        assert_eq!(n.output("s").unwrap().width(), 9);
        for a in 0..256u64 {
            for b in 0..256u64 {
                assert_eq!(n.evaluate(&[a, b]).unwrap()[0], a + b);
            }
        }
    }

    #[test]
    fn planes_agree_with_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = random_netlist(&mut rng, 6, 60, true);
            let a: Vec<u64> = (0..64).map(|_| rng.gen_range(0..64)).collect();
            let b: Vec<u64> = (0..64).map(|_| rng.gen_range(0..64)).collect();
            let mut planes = vec![0u64; 12];
            values_to_planes(&a, 6, &mut planes[..6]);
            values_to_planes(&b, 6, &mut planes[6..]);
            let mut out = vec![0u64; n.output_bits()];
            PlaneEvaluator::new(&n).eval(&planes, &mut out);
            let mut vals = [0u64; 64];
            planes_to_values(&out, &mut vals);
            for j in 0..64 {
                assert_eq!(vals[j], n.evaluate(&[a[j], b[j]]).unwrap()[0]);
            }
        }
    }
}

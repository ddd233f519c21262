use crate::bits::{planes_to_values, values_to_planes};
use crate::circgen::{AxCircuit, OpClass};
use crate::error::{Error, Result};
use crate::netlist::{GateNetlist, PlaneEvaluator};
use serde::{Deserialize, Serialize};

/// Allowed deviation of the total probability from 1.
pub const PMF_TOLERANCE: f64 = 1e-9;

/// Sparse probability mass function over the ordered operand pairs of one
/// operation class.
///
/// Entries are sorted by `(a, b)`, unique and strictly positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    class: OpClass,
    entries: Vec<((u32, u32), f64)>,
}

impl Pmf {
    pub fn new(class: OpClass, mut entries: Vec<((u64, u64), f64)>) -> Result<Pmf> {
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPmf("duplicate support tuple".into()));
        }
        let (amax, bmax) = (1u64 << class.a_width, 1u64 << class.b_width);
        let mut sum = 0.0;
        let mut out = Vec::with_capacity(entries.len());
        for ((a, b), p) in entries {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidPmf(format!("probability {p} at ({a}, {b})")));
            }
            if a >= amax || b >= bmax {
                return Err(Error::InvalidPmf(format!(
                    "tuple ({a}, {b}) outside the operand ranges of {class}"
                )));
            }
            sum += p;
            if p > 0.0 {
                out.push(((a as u32, b as u32), p));
            }
        }
        if (sum - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::PmfNormalization(sum));
        }
        Ok(Pmf { class, entries: out })
    }

    /// Normalizes occurrence counts.
    pub fn from_counts(class: OpClass, counts: impl IntoIterator<Item = ((u64, u64), u64)>) -> Result<Pmf> {
        let counts: Vec<_> = counts.into_iter().filter(|c| c.1 > 0).collect();
        let total: u64 = counts.iter().map(|c| c.1).sum();
        if total == 0 {
            return Err(Error::Empty("no operand occurrences to normalize".into()));
        }
        let t = total as f64;
        Pmf::new(class, counts.into_iter().map(|(k, c)| (k, c as f64 / t)).collect())
    }

    /// Uniform distribution over all operand pairs.
    pub fn uniform(class: OpClass) -> Result<Pmf> {
        if class.input_bits() > 24 {
            return Err(Error::InvalidParameter(format!(
                "uniform support of {class} is too large to enumerate"
            )));
        }
        let n = 1u64 << class.input_bits();
        let p = 1.0 / n as f64;
        let mask = (1u64 << class.a_width) - 1;
        Pmf::new(
            class,
            (0..n).map(|i| ((i & mask, i >> class.a_width), p)).collect(),
        )
    }

    pub fn point(class: OpClass, a: u64, b: u64) -> Result<Pmf> {
        Pmf::new(class, vec![((a, b), 1.0)])
    }

    pub fn class(&self) -> OpClass {
        self.class
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl ExactSizeIterator<Item = ((u64, u64), f64)> + '_ {
        self.entries
            .iter()
            .map(|&((a, b), p)| ((u64::from(a), u64::from(b)), p))
    }

    pub fn probability(&self, a: u64, b: u64) -> f64 {
        let (Ok(a), Ok(b)) = (u32::try_from(a), u32::try_from(b)) else {
            return 0.0;
        };
        self.entries
            .binary_search_by(|e| e.0.cmp(&(a, b)))
            .map_or(0.0, |i| self.entries[i].1)
    }

    /// Probability that each input bit (`a` bits then `b` bits) is 1.
    pub fn bit_probabilities(&self) -> Vec<f64> {
        let (wa, wb) = (self.class.a_width, self.class.b_width);
        let mut out = vec![0.0; (wa + wb) as usize];
        for &((a, b), p) in &self.entries {
            for i in 0..wa {
                if (a >> i) & 1 == 1 {
                    out[i as usize] += p;
                }
            }
            for i in 0..wb {
                if (b >> i) & 1 == 1 {
                    out[(wa + i) as usize] += p;
                }
            }
        }
        out
    }

    /// Support packed into bit planes for repeated bit-sliced scoring.
    pub fn prepare(&self) -> PreparedPmf {
        let class = self.class;
        let bits = class.input_bits() as usize;
        let n = self.entries.len();
        let batches = n.div_ceil(64);
        let mut planes = vec![0u64; batches * bits];
        let mut exact = Vec::with_capacity(n);
        let mut prob = Vec::with_capacity(n);
        let mut av = [0u64; 64];
        let mut bv = [0u64; 64];
        for (bi, chunk) in self.entries.chunks(64).enumerate() {
            for (j, &((a, b), p)) in chunk.iter().enumerate() {
                av[j] = u64::from(a);
                bv[j] = u64::from(b);
                exact.push(class.exact(u64::from(a), u64::from(b)));
                prob.push(p);
            }
            let dst = &mut planes[bi * bits..(bi + 1) * bits];
            let wa = class.a_width as usize;
            values_to_planes(&av[..chunk.len()], wa, &mut dst[..wa]);
            values_to_planes(&bv[..chunk.len()], bits - wa, &mut dst[wa..]);
        }
        PreparedPmf {
            class,
            planes,
            exact,
            prob,
        }
    }
}

/// A [`Pmf`] in evaluation-ready form.
#[derive(Clone, Debug)]
pub struct PreparedPmf {
    class: OpClass,
    planes: Vec<u64>,
    exact: Vec<u64>,
    prob: Vec<f64>,
}

pub(crate) fn check_ports(netlist: &GateNetlist, class: OpClass) -> Result<()> {
    let ins = netlist.inputs();
    let outs = netlist.outputs();
    let ok = ins.len() == 2
        && ins[0].width() == class.a_width as usize
        && ins[1].width() == class.b_width as usize
        && outs.len() == 1
        && outs[0].width() == class.out_width as usize;
    if !ok {
        return Err(Error::ClassMismatch {
            expected: class.to_string(),
            found: "netlist with different port widths".into(),
        });
    }
    Ok(())
}

impl PreparedPmf {
    pub fn class(&self) -> OpClass {
        self.class
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.prob
    }

    /// Absolute error on every support tuple, in support order.
    pub fn errors(&self, netlist: &GateNetlist) -> Result<Vec<u64>> {
        check_ports(netlist, self.class)?;
        let bits = self.class.input_bits() as usize;
        let out_bits = self.class.out_width as usize;
        let mut ev = PlaneEvaluator::new(netlist);
        let mut outp = vec![0u64; out_bits];
        let mut vals = [0u64; 64];
        let mut errs = Vec::with_capacity(self.exact.len());
        for (bi, inp) in self.planes.chunks(bits.max(1)).enumerate() {
            ev.eval(inp, &mut outp);
            planes_to_values(&outp, &mut vals);
            let exact = &self.exact[bi * 64..(bi * 64 + 64).min(self.exact.len())];
            errs.extend(exact.iter().zip(&vals).map(|(&e, &v)| e.abs_diff(v)));
        }
        Ok(errs)
    }

    /// Weighted mean error distance, summed in support order.
    pub fn wmed(&self, netlist: &GateNetlist) -> Result<f64> {
        let errs = self.errors(netlist)?;
        Ok(weighted_sum(&self.prob, &errs))
    }
}

pub(crate) fn weighted_sum(prob: &[f64], errs: &[u64]) -> f64 {
    let mut s = 0.0;
    for (&p, &e) in prob.iter().zip(errs) {
        s += p * e as f64;
    }
    s
}

/// WMED of `circuit` under `pmf`; evaluates only the support tuples.
pub fn score_wmed(circuit: &AxCircuit, pmf: &Pmf) -> Result<f64> {
    if circuit.class != pmf.class {
        return Err(Error::ClassMismatch {
            expected: pmf.class.to_string(),
            found: circuit.class.to_string(),
        });
    }
    pmf.prepare().wmed(&circuit.netlist)
}

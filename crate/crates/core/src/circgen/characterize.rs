use super::{Characterization, OpClass};
use crate::bits::{counter_plane, planes_to_values, values_to_planes};
use crate::error::Result;
use crate::library::pmf::{check_ports, weighted_sum, Pmf};
use crate::netlist::{simplify, CostTable, GateNetlist, PlaneEvaluator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Circuits with at most this many input bits are characterized exhaustively.
pub const EXHAUSTIVE_LIMIT_BITS: u32 = 20;
/// Number of stratified samples for wider circuits.
pub const SAMPLE_COUNT: usize = 1 << 16;
const STRATA: u64 = 16;
const SAMPLE_SEED: u64 = 0x5EED_C1C0;

pub enum InputDistribution<'a> {
    Uniform,
    /// An application PMF, recorded under the given application id.
    Pmf { app: &'a str, pmf: &'a Pmf },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorStats {
    pub mean: f64,
    pub wce: u64,
    pub variance: f64,
    pub evaluated: u64,
    pub exhaustive: bool,
}

/// Error statistics of `netlist` against `class.exact` under `dist`.
pub fn error_stats(netlist: &GateNetlist, class: OpClass, dist: &InputDistribution<'_>) -> Result<ErrorStats> {
    check_ports(netlist, class)?;
    match dist {
        InputDistribution::Uniform if class.input_bits() <= EXHAUSTIVE_LIMIT_BITS => Ok(exhaustive(netlist, class)),
        InputDistribution::Uniform => Ok(sampled(netlist, class)),
        InputDistribution::Pmf { pmf, .. } => {
            if pmf.class() != class {
                return Err(crate::Error::ClassMismatch {
                    expected: class.to_string(),
                    found: pmf.class().to_string(),
                });
            }
            let prep = pmf.prepare();
            let errs = prep.errors(netlist)?;
            let prob = prep.probabilities();
            let mean = weighted_sum(prob, &errs);
            let mut variance = 0.0;
            for (&p, &e) in prob.iter().zip(&errs) {
                let d = e as f64 - mean;
                variance += p * d * d;
            }
            Ok(ErrorStats {
                mean,
                wce: errs.iter().copied().max().unwrap_or(0),
                variance,
                evaluated: errs.len() as u64,
                exhaustive: true,
            })
        }
    }
}

struct Moments {
    n: u128,
    sum: u128,
    sum_sq: u128,
    max: u64,
}

impl Moments {
    fn new() -> Moments {
        Moments {
            n: 0,
            sum: 0,
            sum_sq: 0,
            max: 0,
        }
    }

    fn push(&mut self, e: u64) {
        self.n += 1;
        self.sum += u128::from(e);
        self.sum_sq += u128::from(e) * u128::from(e);
        self.max = self.max.max(e);
    }

    fn finish(&self, exhaustive: bool) -> ErrorStats {
        let n = self.n as f64;
        let num = self.n * self.sum_sq - self.sum * self.sum;
        ErrorStats {
            mean: self.sum as f64 / n,
            wce: self.max,
            variance: num as f64 / (n * n),
            evaluated: self.n as u64,
            exhaustive,
        }
    }
}

fn exhaustive(netlist: &GateNetlist, class: OpClass) -> ErrorStats {
    let bits = class.input_bits();
    let total = 1u64 << bits;
    let a_mask = (1u64 << class.a_width) - 1;
    let mut ev = PlaneEvaluator::new(netlist);
    let mut inp = vec![0u64; bits as usize];
    let mut outp = vec![0u64; class.out_width as usize];
    let mut vals = [0u64; 64];
    let mut m = Moments::new();
    let mut base = 0u64;
    while base < total {
        for (k, p) in inp.iter_mut().enumerate() {
            *p = counter_plane(base, k as u32);
        }
        ev.eval(&inp, &mut outp);
        planes_to_values(&outp, &mut vals);
        let lanes = (total - base).min(64) as usize;
        for (j, &v) in vals[..lanes].iter().enumerate() {
            let idx = base + j as u64;
            m.push(class.exact(idx & a_mask, idx >> class.a_width).abs_diff(v));
        }
        base += 64;
    }
    m.finish(true)
}

/// Stratified uniform sampling: the operand square is split into a
/// `STRATA x STRATA` grid with an equal number of samples per cell.
fn sampled(netlist: &GateNetlist, class: OpClass) -> ErrorStats {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let (wa, wb) = (class.a_width as usize, class.b_width as usize);
    let span = |w: u32| ((1u64 << w) / STRATA).max(1);
    let (sa, sb) = (span(class.a_width), span(class.b_width));
    let per_cell = (SAMPLE_COUNT as u64 / (STRATA * STRATA)).max(1);
    let mut pairs = Vec::with_capacity(SAMPLE_COUNT);
    for ca in 0..STRATA {
        for cb in 0..STRATA {
            for _ in 0..per_cell {
                let a = ((ca * sa) + rng.gen_range(0..sa)).min((1u64 << wa) - 1);
                let b = ((cb * sb) + rng.gen_range(0..sb)).min((1u64 << wb) - 1);
                pairs.push((a, b));
            }
        }
    }
    let mut ev = PlaneEvaluator::new(netlist);
    let mut inp = vec![0u64; wa + wb];
    let mut outp = vec![0u64; class.out_width as usize];
    let mut vals = [0u64; 64];
    let mut av = [0u64; 64];
    let mut bv = [0u64; 64];
    let mut m = Moments::new();
    for chunk in pairs.chunks(64) {
        for (j, &(a, b)) in chunk.iter().enumerate() {
            av[j] = a;
            bv[j] = b;
        }
        values_to_planes(&av[..chunk.len()], wa, &mut inp[..wa]);
        values_to_planes(&bv[..chunk.len()], wb, &mut inp[wa..]);
        ev.eval(&inp, &mut outp);
        planes_to_values(&outp, &mut vals);
        for (j, &(a, b)) in chunk.iter().enumerate() {
            m.push(class.exact(a, b).abs_diff(vals[j]));
        }
    }
    m.finish(false)
}

/// Full characterization record of `netlist` (simplified first).
///
/// `med` and `wce` always refer to uniform inputs. With a PMF, the variance
/// and the power estimate follow the PMF and its WMED is recorded under the
/// application id.
pub fn characterize(
    netlist: &GateNetlist,
    class: OpClass,
    dist: &InputDistribution<'_>,
    table: &CostTable,
) -> Result<Characterization> {
    let netlist = simplify(netlist);
    let uniform = error_stats(&netlist, class, &InputDistribution::Uniform)?;
    let mut wmed = BTreeMap::new();
    let (variance, probs) = match dist {
        InputDistribution::Uniform => (uniform.variance, None),
        InputDistribution::Pmf { app, pmf } => {
            let s = error_stats(&netlist, class, dist)?;
            wmed.insert(app.to_string(), s.mean);
            (s.variance, Some(pmf.bit_probabilities()))
        }
    };
    let hw = netlist.metrics(table, probs.as_deref());
    Ok(Characterization {
        area: hw.area,
        delay: hw.delay,
        power: hw.power,
        med: uniform.mean,
        wce: uniform.wce as f64,
        err_variance: variance,
        wmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circgen::{gen_segmented_adder, gen_truncated_adder, LowPolicy, OpKind};

    #[test]
    fn point_mass_wmed_is_single_error() {
        let c = gen_truncated_adder(4, 2, LowPolicy::Zero).unwrap();
        let pmf = Pmf::point(c.class, 3, 2).unwrap();
        let ch = characterize(
            &c.netlist,
            c.class,
            &InputDistribution::Pmf { app: "p", pmf: &pmf },
            &CostTable::default(),
        )
        .unwrap();
        let got = c.netlist.evaluate(&[3, 2]).unwrap()[0];
        assert_eq!(ch.wmed["p"], 5f64 - got as f64);
        assert_eq!(ch.err_variance, 0.0);
    }

    #[test]
    fn sampled_path_is_deterministic_and_close() {
        let class = OpClass::new(OpKind::Add, 11, 11, 12).unwrap();
        let c = crate::circgen::gen_adder(
            class,
            crate::circgen::AdderParams {
                cut: 3,
                policy: LowPolicy::Zero,
                boundaries: vec![],
            },
        )
        .unwrap();
        let s1 = error_stats(&c.netlist, class, &InputDistribution::Uniform).unwrap();
        let s2 = error_stats(&c.netlist, class, &InputDistribution::Uniform).unwrap();
        assert_eq!(s1, s2);
        assert!(!s1.exhaustive);
        assert_eq!(s1.evaluated, SAMPLE_COUNT as u64);
        // The error is (a + b) mod 8, uniform over 0..8.
        assert!((s1.mean - 3.5).abs() < 0.05, "{}", s1.mean);
        assert_eq!(s1.wce, 7);
    }

    #[test]
    fn exhaustive_handles_fewer_than_64_vectors() {
        let c = gen_segmented_adder(2, &[1]).unwrap();
        let s = error_stats(&c.netlist, c.class, &InputDistribution::Uniform).unwrap();
        assert_eq!(s.evaluated, 16);
        // carry from bit 0 lost when a0 = b0 = 1: 4 of 16 pairs, error 2.
        assert_eq!(s.mean, 0.5);
        assert_eq!(s.wce, 2);
    }
}

use axdse::circgen::*;
use axdse::library::Pmf;
use axdse::netlist::CostTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Oracle {
    med: f64,
    wce: f64,
    variance: f64,
    wmed: f64,
    pmf_variance: f64,
}

fn exact_value(class: OpClass, a: u64, b: u64) -> u64 {
    match class.kind {
        OpKind::Add => a + b,
        OpKind::Sub => a.abs_diff(b),
        OpKind::Mul => a * b,
    }
}

/// Scalar evaluation of every operand pair, independent of the bit-sliced path.
fn brute_force(c: &AxCircuit, pmf: &Pmf) -> Oracle {
    let (wa, wb) = (c.class.a_width, c.class.b_width);
    let n = 1u64 << (wa + wb);
    let err = |a: u64, b: u64| -> u64 {
        let y = c.netlist.evaluate(&[a, b]).unwrap()[0];
        y.abs_diff(exact_value(c.class, a, b))
    };
    let (mut sum, mut sum_sq, mut max) = (0u128, 0u128, 0u64);
    for a in 0..1u64 << wa {
        for b in 0..1u64 << wb {
            let e = err(a, b);
            sum += u128::from(e);
            sum_sq += u128::from(e) * u128::from(e);
            max = max.max(e);
        }
    }
    let n128 = u128::from(n);
    let nf = n as f64;
    let errs: Vec<(f64, f64)> = pmf.entries().map(|((a, b), p)| (p, err(a, b) as f64)).collect();
    let wmed = errs.iter().fold(0.0, |s, &(p, e)| s + p * e);
    let pmf_variance = errs.iter().fold(0.0, |s, &(p, e)| s + p * (e - wmed) * (e - wmed));
    Oracle {
        med: sum as f64 / nf,
        wce: max as f64,
        variance: (n128 * sum_sq - sum * sum) as f64 / (nf * nf),
        wmed,
        pmf_variance,
    }
}

fn random_pmf(class: OpClass, support: usize, seed: u64) -> Pmf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..support {
        let a = rng.gen_range(0..1u64 << class.a_width);
        let b = rng.gen_range(0..1u64 << class.b_width);
        *counts.entry((a, b)).or_insert(0u64) += rng.gen_range(1..50);
    }
    Pmf::from_counts(class, counts).unwrap()
}

fn check(c: &AxCircuit, pmf: &Pmf) {
    let table = CostTable::default();
    let o = brute_force(c, pmf);
    let uni = characterize(&c.netlist, c.class, &InputDistribution::Uniform, &table).unwrap();
    assert_eq!(uni.med, o.med, "{}", c.id);
    assert_eq!(uni.wce, o.wce, "{}", c.id);
    assert!((uni.err_variance - o.variance).abs() <= 1e-12, "{}", c.id);
    let app = InputDistribution::Pmf { app: "t", pmf };
    let ch = characterize(&c.netlist, c.class, &app, &table).unwrap();
    assert_eq!(ch.wmed["t"], o.wmed, "{}", c.id);
    assert!((ch.err_variance - o.pmf_variance).abs() <= 1e-12, "{}", c.id);
}

#[test]
fn sampled_library_matches_brute_force() {
    let spec = LibrarySpec::default_for(&[OpClass::ADD8, OpClass::MUL8]);
    let lib = build_default_library(&spec).unwrap();
    let pmfs = [random_pmf(OpClass::ADD8, 3000, 1), random_pmf(OpClass::MUL8, 3000, 2)];
    for c in lib.iter().step_by(9) {
        let pmf = pmfs.iter().find(|p| p.class() == c.class).unwrap();
        check(c, pmf);
    }
}

#[test]
fn segmented_adder_errs_exactly_on_crossing_carry() {
    let seg = gen_segmented_adder(8, &[4]).unwrap().netlist;
    for a in 0..256u64 {
        for b in 0..256u64 {
            let y = seg.evaluate(&[a, b]).unwrap()[0];
            let crosses = (a & 15) + (b & 15) > 15;
            assert_eq!(y != a + b, crosses, "{a}+{b}");
        }
    }
}

#[test]
fn broken_array_multiplier_med() {
    let n = gen_broken_array_multiplier(4, 2, 0).unwrap().netlist;
    let mut sum = 0u64;
    for a in 0..16u64 {
        for b in 0..16u64 {
            sum += n.evaluate(&[a, b]).unwrap()[0].abs_diff(a * b);
        }
    }
    let class = OpClass::new(OpKind::Mul, 4, 4, 8).unwrap();
    let st = error_stats(&n, class, &InputDistribution::Uniform).unwrap();
    assert_eq!(st.mean, sum as f64 / 256.0);
    assert!(st.exhaustive);
}

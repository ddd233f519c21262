use axdse::accel::*;
use axdse::circgen::{exact_circuit, gen_abs_diff, gen_adder, AbsDiffParams, AdderParams, Catalog, LowPolicy, OpClass};
use axdse::library::Pmf;

fn exact_catalog(graph: &AccelGraph) -> Catalog {
    let mut classes: Vec<OpClass> = graph.class_counts().into_keys().collect();
    classes.sort();
    Catalog::new(classes.into_iter().map(|c| exact_circuit(c).unwrap()).collect()).unwrap()
}

fn sobel_oracle(img: &GrayImage) -> GrayImage {
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let p = |dx: isize, dy: isize| i64::from(img.get_clamped(x as isize + dx, y as isize + dy));
        let left = p(-1, -1) + 2 * p(-1, 0) + p(-1, 1);
        let right = p(1, -1) + 2 * p(1, 0) + p(1, 1);
        (right - left).abs().min(255) as u8
    })
}

fn conv_oracle(img: &GrayImage, k: &[u64; 9], shift: u32) -> GrayImage {
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let mut s = 0u64;
        for r in 0..3 {
            for c in 0..3 {
                let v = img.get_clamped(x as isize + c as isize - 1, y as isize + r as isize - 1);
                s += k[r * 3 + c] * u64::from(v);
            }
        }
        (s >> shift).min(255) as u8
    })
}

fn kernel_consts(k: &[u64; 9]) -> Vec<(String, u64)> {
    (0..9).map(|n| (coeff_input(n / 3, n % 3), k[n])).collect()
}

#[test]
fn exact_sobel_matches_oracle() {
    let g = build_sobel();
    let cat = exact_catalog(&g);
    let cfg = Configuration::exact(&g, &cat).unwrap();
    for (i, img) in synthetic_set(5, 23, 17, 11).iter().enumerate() {
        let out = simulate(&g, &cfg, &cat, img, &[]).unwrap();
        assert_eq!(out, sobel_oracle(img), "image {i}");
    }
    let flat = GrayImage::filled(9, 9, 77);
    let out = simulate(&g, &cfg, &cat, &flat, &[]).unwrap();
    assert!(out.pixels().iter().all(|&v| v == 0));
}

#[test]
fn exact_fixed_gf_matches_quantized_oracle() {
    let g = build_fixed_gf();
    let cat = exact_catalog(&g);
    let cfg = Configuration::exact(&g, &cat).unwrap();
    for img in synthetic_set(4, 19, 13, 5) {
        let out = simulate(&g, &cfg, &cat, &img, &[]).unwrap();
        assert_eq!(out, conv_oracle(&img, &FIXED_GF_KERNEL, 8));
    }
    for v in [0u8, 1, 128, 255] {
        let flat = GrayImage::filled(5, 4, v);
        assert_eq!(simulate(&g, &cfg, &cat, &flat, &[]).unwrap(), flat);
    }
}

#[test]
fn exact_generic_gf_matches_oracle_and_preserves_dc() {
    let g = build_generic_gf();
    let cat = exact_catalog(&g);
    let cfg = Configuration::exact(&g, &cat).unwrap();
    let img = synthetic(Synthetic::Scene, 15, 11, 2);
    for k in generic_gf_kernels(5, 0.3, 0.8) {
        let out = simulate(&g, &cfg, &cat, &img, &kernel_consts(&k)).unwrap();
        assert_eq!(out, conv_oracle(&img, &k, 8));
    }
    let uniform = gaussian_kernel(1e6);
    assert_eq!(uniform.iter().sum::<u64>(), 256);
    let flat = GrayImage::filled(6, 6, 200);
    assert_eq!(simulate(&g, &cfg, &cat, &flat, &kernel_consts(&uniform)).unwrap(), flat);
}

#[test]
fn truncated_subtractor_changes_sobel_output() {
    let g = build_sobel();
    let mut circuits = vec![
        exact_circuit(OpClass::ADD8).unwrap(),
        exact_circuit(OpClass::ADD9).unwrap(),
        exact_circuit(OpClass::SUB10).unwrap(),
    ];
    circuits.push(
        gen_abs_diff(
            OpClass::SUB10,
            AbsDiffParams {
                cut: 9,
                policy: LowPolicy::Zero,
                boundaries: vec![9],
                exact_negate: false,
            },
        )
        .unwrap(),
    );
    let cat = Catalog::new(circuits).unwrap();
    let exact = Configuration::exact(&g, &cat).unwrap();
    let mut approx = exact.clone();
    approx.0[4] = 3;
    let img = synthetic(Synthetic::HorizontalGradient, 32, 8, 0);
    let a = simulate(&g, &exact, &cat, &img, &[]).unwrap();
    let b = simulate(&g, &approx, &cat, &img, &[]).unwrap();
    assert_ne!(a, b);
    assert_eq!(b, simulate(&g, &approx, &cat, &img, &[]).unwrap());
}

#[test]
fn class_mismatch_rejected() {
    let g = build_sobel();
    let cat = exact_catalog(&g);
    let mut cfg = Configuration::exact(&g, &cat).unwrap();
    cfg.0.swap(0, 1);
    let img = GrayImage::filled(4, 4, 1);
    assert!(simulate(&g, &cfg, &cat, &img, &[]).is_err());
    cfg.0.pop();
    assert!(simulate(&g, &cfg, &cat, &img, &[]).is_err());
}

#[test]
fn approximate_adder_is_simulated_by_its_netlist() {
    let g = build_sobel();
    let approx = gen_adder(
        OpClass::ADD8,
        AdderParams {
            cut: 4,
            policy: LowPolicy::CopyA,
            boundaries: vec![],
        },
    )
    .unwrap();
    let n = approx.netlist.clone();
    let cat = Catalog::new(vec![
        exact_circuit(OpClass::ADD8).unwrap(),
        exact_circuit(OpClass::ADD9).unwrap(),
        exact_circuit(OpClass::SUB10).unwrap(),
        approx,
    ])
    .unwrap();
    let mut cfg = Configuration::exact(&g, &cat).unwrap();
    cfg.0[0] = 3;
    let img = synthetic(Synthetic::Noise { sigma: 50.0 }, 12, 12, 4);
    let out = simulate(&g, &cfg, &cat, &img, &[]).unwrap();
    let expect = GrayImage::from_fn(12, 12, |x, y| {
        let p = |dx: isize, dy: isize| u64::from(img.get_clamped(x as isize + dx, y as isize + dy));
        let add1 = n.evaluate(&[p(-1, -1), p(-1, 1)]).unwrap()[0];
        let left = add1 + 2 * p(-1, 0);
        let right = p(1, -1) + p(1, 1) + 2 * p(1, 0);
        (right as i64 - left as i64).unsigned_abs().min(255) as u8
    });
    assert_eq!(out, expect);
}

#[test]
fn profiling_point_mass_and_shift_structure() {
    let g = build_sobel();
    let flat = GrayImage::filled(8, 8, 93);
    let w = Workload::new(&g, &[flat], &[]).unwrap();
    let pmfs = profile_pmfs(&g, &w).unwrap();
    assert_eq!(pmfs[0], Pmf::point(OpClass::ADD8, 93, 93).unwrap());

    let grad = synthetic(Synthetic::HorizontalGradient, 40, 6, 0);
    let w = Workload::new(&g, &[grad.clone(), synthetic(Synthetic::Scene, 30, 30, 1)], &[]).unwrap();
    let pmfs = profile_pmfs(&g, &w).unwrap();
    for p in &pmfs {
        let s: f64 = p.entries().map(|e| e.1).sum();
        assert!((s - 1.0).abs() < 1e-9);
    }
    // add2's second operand is a left-shifted pixel.
    assert!(pmfs[1].entries().all(|((_, b), _)| b % 2 == 0));
    assert!(Workload::new(&g, &[], &[]).is_err());
}

#[test]
fn pgm_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let img = synthetic(Synthetic::Checkerboard { cell: 2 }, 9, 5, 0);
    let path = dir.path().join("x.pgm");
    img.write_pgm(&path).unwrap();
    assert_eq!(GrayImage::read_pgm(&path).unwrap(), img);
}

mod common;

use axdse::accel::*;
use axdse::quality::QorEvaluator;
use axdse::synth::{component_area, compose, hw_cost};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vectors(graph: &AccelGraph, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    (0..count)
        .map(|_| {
            graph
                .inputs()
                .iter()
                .map(|&i| rng.gen_range(0..1u64 << graph.node(i).width))
                .collect()
        })
        .collect()
}

#[test]
fn composed_netlist_matches_simulator() {
    for bench in Benchmark::ALL {
        let s = common::setup(bench, 1, 12, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(bench as u64);
        let sizes = s.rl.sizes();
        for trial in 0..4 {
            let choice: Vec<usize> = sizes.iter().map(|&n| rng.gen_range(0..n)).collect();
            let cfg = Configuration(s.rl.circuits(&choice));
            let flat = compose(&s.graph, &cfg, &s.catalog).unwrap();
            let vectors = random_vectors(&s.graph, 300, &mut rng);
            let sim = Simulator::new(&s.graph, &s.catalog, &cfg).unwrap();
            let got = sim.raw_outputs(&Stimulus::from_vectors(&s.graph, &vectors).unwrap());
            for (v, g) in vectors.iter().zip(&got) {
                assert_eq!(flat.evaluate(v).unwrap()[0], *g, "{bench} trial {trial} input {v:?}");
            }
        }
    }
}

#[test]
fn exact_configuration_scores_one() {
    for bench in Benchmark::ALL {
        let s = common::setup(bench, 2, 16, 3);
        let q = QorEvaluator::new(&s.graph, &s.catalog, &s.workload).unwrap();
        let exact = Configuration::exact(&s.graph, &s.catalog).unwrap();
        assert_eq!(q.mean_ssim(&exact).unwrap(), 1.0, "{bench}");
    }
}

#[test]
fn sobel_composition_eliminates_logic() {
    let s = common::setup(Benchmark::Sobel, 1, 16, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sizes = s.rl.sizes();
    let mut best = f64::INFINITY;
    for _ in 0..200 {
        let choice: Vec<usize> = sizes.iter().map(|&n| rng.gen_range(0..n)).collect();
        let cfg = Configuration(s.rl.circuits(&choice));
        let ratio = hw_cost(&s.graph, &cfg, &s.catalog).unwrap().area / component_area(&cfg, &s.catalog);
        assert!(ratio <= 1.0 + 1e-12);
        best = best.min(ratio);
    }
    assert!(best < 0.95, "smallest area ratio {best}");
}

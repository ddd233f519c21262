mod common;

use axdse::accel::{Benchmark, Configuration};
use axdse::explore::*;
use axdse::truth::GroundTruth;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[test]
fn neighbour_mutates_each_sobel_node_uniformly() {
    let s = common::setup(Benchmark::Sobel, 1, 16, 0);
    let sizes = s.rl.sizes();
    assert!(sizes.iter().all(|&n| n >= 2));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut parent = vec![0; sizes.len()];
    let mut hits = vec![0usize; sizes.len()];
    let draws = 10_000;
    for _ in 0..draws {
        let n = get_neighbour(&parent, &sizes, &mut rng).unwrap();
        let k = (0..sizes.len()).find(|&k| n[k] != parent[k]).unwrap();
        hits[k] += 1;
        parent = n;
    }
    for h in hits {
        assert!((h as f64 / draws as f64 - 0.2).abs() <= 0.02, "{h}");
    }
}

/// Separable toy objectives over a 6^4 space.
fn toy() -> (Vec<usize>, impl Fn(&[usize]) -> f64 + Sync, impl Fn(&[usize]) -> f64 + Sync) {
    let q = |c: &[usize]| 1.0 - c.iter().enumerate().map(|(k, &v)| (v * v * (k + 1)) as f64).sum::<f64>() / 1000.0;
    let a = |c: &[usize]| c.iter().enumerate().map(|(k, &v)| ((6 - v) * (3 + k)) as f64 + (v % 2) as f64).sum::<f64>();
    (vec![6; 4], q, a)
}

#[test]
fn heuristic_recovers_toy_front() {
    let (sizes, q, a) = toy();
    let optimal = exhaustive_estimated(&sizes, &q, &a, 10_000).unwrap();
    let params = ExploreParams::new(20_000, 50, 4).unwrap();
    let (found, stats) = heuristic_pareto(&sizes, &q, &a, &params);
    assert_eq!(stats.evaluations, 20_000);
    assert!(recovery_rate(&found, &optimal) >= 0.95);
    for f in found.entries() {
        assert!(optimal.entries().iter().all(|o| !dominates((f.qor, f.area), (o.qor, o.area))));
    }
    let d = front_distances(&found.objectives(), &optimal.objectives()).unwrap();
    assert!(d.to_opt_avg <= 0.01);
    let short = heuristic_pareto(&sizes, &q, &a, &ExploreParams::new(1000, 50, 4).unwrap()).0;
    assert!(recovery_rate(&found, &optimal) >= recovery_rate(&short, &optimal));
}

#[test]
fn random_sampling_baseline_examples() {
    let (sizes, q, a) = toy();
    assert_eq!(random_sampling_baseline(&sizes, &q, &a, 1, 0).len(), 1);
    assert_eq!(
        random_sampling_baseline(&sizes, &q, &a, 500, 3),
        random_sampling_baseline(&sizes, &q, &a, 500, 3)
    );
}

#[test]
fn table_estimator_drives_the_heuristic() {
    let (sizes, q, _) = toy();
    let table: HashMap<Vec<usize>, f64> = enumerate_choices(&sizes, 10_000).unwrap().into_iter().map(|c| {
        let v = q(&c);
        (c, v)
    }).collect();
    let t = TableEstimator::new(table);
    assert_eq!(t.estimate(&[1, 2, 3, 4]), q(&[1, 2, 3, 4]));
    assert!(t.estimate(&[9, 9, 9, 9]).is_nan());
}

#[test]
fn sobel_exact_configuration_finalizes_to_itself() {
    let s = common::setup(Benchmark::Sobel, 2, 16, 0);
    let truth = GroundTruth::new(&s.graph, &s.catalog, &s.workload).unwrap();
    let levels = geometric_levels(20, 1e-4, 0.2);
    let uniform = uniform_selection_baseline(&s.rl, &levels);
    assert!(uniform.len() <= 20);
    // Reduced libraries are sorted by wmed and contain a zero-wmed entry.
    assert_eq!(uniform[0], vec![0; s.rl.nodes.len()]);
    let exact = Configuration::exact(&s.graph, &s.catalog).unwrap();
    let exact_choice: Vec<usize> = s
        .rl
        .nodes
        .iter()
        .zip(&exact.0)
        .map(|(n, &c)| n.entries.iter().position(|e| e.circuit == c).unwrap_or(0))
        .collect();
    let mut pseudo = ParetoSet::new();
    pseudo.insert(0.5, 1.0, &exact_choice, Provenance::Estimated);
    let fin = reevaluate_and_finalize(&pseudo, &truth, &s.rl).unwrap();
    assert_eq!(fin.front.len(), 1);
    assert_eq!(fin.front.entries()[0].qor, 1.0);
    assert_eq!(fin.front.entries()[0].provenance, Provenance::Real);

    let capped = s.rl.capped(3);
    let labels = exhaustive_labels(&truth, &capped, 1000).unwrap();
    assert_eq!(labels.len(), 243);
    let optimal = front_of_samples(&labels);
    let table = |f: fn(&axdse::truth::Labels) -> f64| {
        TableEstimator::new(labels.iter().map(|s| (s.choice.clone(), f(&s.labels))).collect())
    };
    let (q, a) = (table(|l| l.qor), table(|l| l.area));
    let (found, _) = heuristic_pareto(&capped.sizes(), &q, &a, &ExploreParams::new(3000, 50, 1).unwrap());
    let fin = reevaluate_and_finalize(&found, &truth, &capped).unwrap();
    assert!(fin.front.len() <= found.len());
    for f in fin.front.entries() {
        assert!(optimal.entries().iter().all(|o| !dominates((f.qor, f.area), (o.qor, o.area))));
    }
    assert!(matches!(exhaustive_pareto(&truth, &s.rl, 10), Err(axdse::Error::SpaceTooLarge { .. })));
}

mod common;

use axdse::accel::{profile_pmfs, Benchmark};
use axdse::library::*;
use std::collections::BTreeMap;

#[test]
fn reduced_libraries_equal_dominance_oracle() {
    let s = common::setup(Benchmark::Sobel, 2, 20, 0);
    let pmfs = pmf_map(&s.graph, profile_pmfs(&s.graph, &s.workload).unwrap());
    for node in &s.rl.nodes {
        let pmf = &pmfs[&node.node];
        let cands: Vec<Candidate> = s
            .catalog
            .of_class(node.class)
            .into_iter()
            .map(|i| {
                let c = s.catalog.get(i);
                Candidate::new(c.id.clone(), score_wmed(c, pmf).unwrap(), c.characterization.area)
            })
            .collect();
        let mut oracle: Vec<String> = cands
            .iter()
            .filter(|x| !cands.iter().any(|y| y.dominates(x)))
            .map(|x| x.id.clone())
            .collect();
        let mut got: Vec<String> = node.entries.iter().map(|e| e.id.clone()).collect();
        // Equal-objective duplicates collapse to one representative.
        let objectives = |ids: &[String]| -> Vec<(u64, u64)> {
            let mut v: Vec<(u64, u64)> = ids
                .iter()
                .map(|i| {
                    let c = cands.iter().find(|c| &c.id == i).unwrap();
                    (c.wmed.to_bits(), c.area.to_bits())
                })
                .collect();
            v.sort();
            v.dedup();
            v
        };
        assert_eq!(objectives(&got), objectives(&oracle), "{}", node.node);
        got.sort();
        oracle.sort();
        assert!(got.iter().all(|g| oracle.contains(g)));
        assert_eq!(node.entries[0].wmed, 0.0);
        assert!(node.entries.windows(2).all(|w| w[0].wmed < w[1].wmed && w[0].area > w[1].area));
    }
}

#[test]
fn reduced_library_csv_round_trip_and_missing_pmf() {
    let s = common::setup(Benchmark::Sobel, 1, 16, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rl.csv");
    s.rl.save_csv(&path).unwrap();
    let back = ReducedLibrary::load_csv(&path, &s.graph, &s.catalog).unwrap();
    assert_eq!(back, s.rl);
    let capped = s.rl.capped(4);
    assert!(capped.sizes().iter().all(|&n| n <= 4));
    assert_eq!(capped.space_size(), capped.sizes().iter().map(|&n| n as f64).product::<f64>());
    let mut pmfs: BTreeMap<String, Pmf> = pmf_map(&s.graph, profile_pmfs(&s.graph, &s.workload).unwrap());
    pmfs.remove("sub");
    match reduce_library(&s.catalog, &s.graph, &pmfs) {
        Err(axdse::Error::MissingPmf(n)) => assert_eq!(n, "sub"),
        other => panic!("{other:?}"),
    }
}

mod common;

use axdse::accel::Benchmark;
use axdse::surrogate::*;
use axdse::truth::GroundTruth;

#[test]
fn sobel_models_beat_or_match_naive() {
    let s = common::setup(Benchmark::Sobel, 2, 24, 0);
    let truth = GroundTruth::new(&s.graph, &s.catalog, &s.workload).unwrap();
    let sets = sample_choices(&s.rl, &[300, 300], 8).unwrap();
    let train = label(&truth, &s.rl, &sets[0]).unwrap();
    let test = label(&truth, &s.rl, &sets[1]).unwrap();
    assert!(train.iter().all(|t| !test.iter().any(|u| u.choice == t.choice)));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("train.csv");
    save_samples(&path, &s.rl, &train).unwrap();
    assert_eq!(load_samples(&path, &s.rl).unwrap(), train);

    for target in [Target::Qor, Target::Hw] {
        let spec = FeatureSpec::new(target, &s.rl, &s.catalog);
        let (x, y) = design_matrix(&spec, &train);
        let (xt, yt) = design_matrix(&spec, &test);
        let sel = select_model(&EngineSpec::defaults(target, 1), target, (&x, &y), (&xt, &yt)).unwrap();
        let naive = &sel.candidates[0];
        assert!(naive.engine.name().starts_with("naive"));
        assert!(sel.best.test_fidelity >= naive.test_fidelity, "{}", target.name());
        assert!(sel.best.test_fidelity.unwrap() > 0.7, "{} {:?}", target.name(), sel.best.test_fidelity);

        let by_name = |n: &str| sel.candidates.iter().find(|m| m.engine.name() == n).unwrap();
        let (rf, tree) = (by_name("random_forest"), by_name("decision_tree"));
        assert!(rf.train_fidelity.unwrap() >= tree.test_fidelity.unwrap(), "{}", target.name());
        if tree.test_fidelity < rf.test_fidelity {
            assert_ne!(sel.best.engine.name(), "decision_tree");
        }

        let mpath = dir.path().join("m.json");
        sel.best.save(&mpath).unwrap();
        let back = TrainedModel::load(&mpath).unwrap();
        assert_eq!(back.predict(&xt[0]), sel.best.predict(&xt[0]));
    }
}

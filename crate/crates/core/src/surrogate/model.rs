use super::cart::{RegressionTree, TreeParams};
use super::features::Target;
use super::fidelity::fidelity;
use super::forest::{ForestParams, RandomForest};
use super::knn::Knn;
use super::linear::Linear;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Minimum training-set size of the learned engines.
pub const MIN_SAMPLES: usize = 10;

/// A learning engine with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum EngineSpec {
    RandomForest(ForestParams),
    DecisionTree(TreeParams),
    Knn { k: usize },
    Linear,
    /// Negated sum of the per-node WMEDs.
    NaiveQor,
    /// Sum of the per-node areas.
    NaiveHw,
}

impl EngineSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EngineSpec::RandomForest(_) => "random_forest",
            EngineSpec::DecisionTree(_) => "decision_tree",
            EngineSpec::Knn { .. } => "knn",
            EngineSpec::Linear => "linear",
            EngineSpec::NaiveQor => "naive_qor",
            EngineSpec::NaiveHw => "naive_hw",
        }
    }

    /// Tie-break order of model selection; simpler engines rank lower.
    pub fn simplicity(&self) -> u8 {
        match self {
            EngineSpec::NaiveQor | EngineSpec::NaiveHw => 0,
            EngineSpec::Linear => 1,
            EngineSpec::Knn { .. } => 2,
            EngineSpec::DecisionTree(_) => 3,
            EngineSpec::RandomForest(_) => 4,
        }
    }

    /// Compact parameter description.
    pub fn params(&self) -> String {
        match self {
            EngineSpec::RandomForest(p) => format!(
                "trees={} max_features={} min_leaf={} bootstrap={} seed={}",
                p.trees,
                p.max_features.map_or("ceil(d/3)".to_string(), |m| m.to_string()),
                p.min_leaf,
                p.bootstrap,
                p.seed
            ),
            EngineSpec::DecisionTree(p) => format!(
                "min_leaf={} max_depth={}",
                p.min_leaf,
                p.max_depth.map_or("none".to_string(), |m| m.to_string())
            ),
            EngineSpec::Knn { k } => format!("k={k}"),
            _ => String::new(),
        }
    }

    pub fn from_name(name: &str, seed: u64) -> Result<EngineSpec> {
        Ok(match name {
            "random_forest" => EngineSpec::RandomForest(ForestParams {
                seed,
                ..ForestParams::default()
            }),
            "decision_tree" => EngineSpec::DecisionTree(TreeParams::default()),
            "knn" => EngineSpec::Knn { k: 5 },
            "linear" => EngineSpec::Linear,
            "naive_qor" => EngineSpec::NaiveQor,
            "naive_hw" => EngineSpec::NaiveHw,
            _ => return Err(Error::InvalidParameter(format!("unknown engine `{name}`"))),
        })
    }

    /// The default candidate set for `target`: the four learned engines
    /// plus the matching naive model.
    pub fn defaults(target: Target, seed: u64) -> Vec<EngineSpec> {
        vec![
            naive_for(target),
            EngineSpec::Linear,
            EngineSpec::Knn { k: 5 },
            EngineSpec::DecisionTree(TreeParams::default()),
            EngineSpec::RandomForest(ForestParams {
                seed,
                ..ForestParams::default()
            }),
        ]
    }
}

fn naive_for(target: Target) -> EngineSpec {
    match target {
        Target::Qor => EngineSpec::NaiveQor,
        Target::Hw => EngineSpec::NaiveHw,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum State {
    Constant(f64),
    Tree(RegressionTree),
    Forest(RandomForest),
    Knn(Knn),
    Linear(Linear),
    /// `sign * sum(x[i * stride])`.
    Naive { sign: f64, stride: usize },
}

/// A fitted estimator with its fidelities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub engine: EngineSpec,
    pub target: Target,
    state: State,
    pub train_fidelity: Option<f64>,
    pub test_fidelity: Option<f64>,
}

impl TrainedModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match &self.state {
            State::Constant(c) => *c,
            State::Tree(t) => t.predict(x),
            State::Forest(f) => f.predict(x),
            State::Knn(k) => k.predict(x),
            State::Linear(l) => l.predict(x),
            State::Naive { sign, stride } => {
                let mut s = 0.0;
                for v in x.iter().step_by(*stride) {
                    s += v;
                }
                sign * s
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.state, State::Constant(_))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<TrainedModel> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    /// Records train and test fidelity.
    pub fn score(&mut self, train: (&[Vec<f64>], &[f64]), test: (&[Vec<f64>], &[f64])) -> Result<()> {
        let tie = self.target.tie();
        let est = |x: &[Vec<f64>]| x.iter().map(|r| self.predict(r)).collect::<Vec<_>>();
        let tr = fidelity(&est(train.0), train.1, tie)?;
        let te = fidelity(&est(test.0), test.1, tie)?;
        self.train_fidelity = Some(tr);
        self.test_fidelity = Some(te);
        Ok(())
    }
}

/// The closed-form naive models `(hw, qor)`.
pub fn naive_models() -> (TrainedModel, TrainedModel) {
    let mk = |engine, target, sign, stride| TrainedModel {
        engine,
        target,
        state: State::Naive { sign, stride },
        train_fidelity: None,
        test_fidelity: None,
    };
    (
        mk(EngineSpec::NaiveHw, Target::Hw, 1.0, 3),
        mk(EngineSpec::NaiveQor, Target::Qor, -1.0, 1),
    )
}

/// Fits `engine` on `(x, y)`. Constant labels yield a constant predictor.
pub fn fit(engine: &EngineSpec, target: Target, x: &[Vec<f64>], y: &[f64]) -> Result<TrainedModel> {
    let (naive_hw, naive_qor) = naive_models();
    match (engine, target) {
        (EngineSpec::NaiveQor, Target::Qor) => return Ok(naive_qor),
        (EngineSpec::NaiveHw, Target::Hw) => return Ok(naive_hw),
        (EngineSpec::NaiveQor | EngineSpec::NaiveHw, _) => {
            return Err(Error::InvalidParameter(format!(
                "{} cannot estimate the {} target",
                engine.name(),
                target.name()
            )))
        }
        _ => {}
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(format!("{} feature rows for {} labels", x.len(), y.len())));
    }
    if y.len() < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "{} needs at least {MIN_SAMPLES} samples, got {}",
            engine.name(),
            y.len()
        )));
    }
    let d = x[0].len();
    if x.iter().any(|r| r.len() != d) {
        return Err(Error::LengthMismatch("feature rows of different lengths".into()));
    }
    let state = if y.iter().all(|&v| v == y[0]) {
        State::Constant(y[0])
    } else {
        match engine {
            EngineSpec::RandomForest(p) => State::Forest(RandomForest::fit(x, y, *p)),
            EngineSpec::DecisionTree(p) => State::Tree(RegressionTree::fit(x, y, *p)),
            EngineSpec::Knn { k } => State::Knn(Knn::fit(x, y, *k)),
            EngineSpec::Linear => State::Linear(Linear::fit(x, y)),
            EngineSpec::NaiveQor | EngineSpec::NaiveHw => unreachable!("handled above"),
        }
    };
    Ok(TrainedModel {
        engine: engine.clone(),
        target,
        state,
        train_fidelity: None,
        test_fidelity: None,
    })
}

/// Outcome of model selection: the winner and every candidate's scores.
#[derive(Clone, Debug)]
pub struct Selection {
    pub best: TrainedModel,
    pub candidates: Vec<TrainedModel>,
}

/// Fits every candidate on the training set and keeps the one with the
/// highest test fidelity; ties go to the simpler engine, then to the
/// earlier candidate.
pub fn select_model(
    candidates: &[EngineSpec],
    target: Target,
    train: (&[Vec<f64>], &[f64]),
    test: (&[Vec<f64>], &[f64]),
) -> Result<Selection> {
    if candidates.is_empty() {
        return Err(Error::Empty("no candidate engines".into()));
    }
    let mut fitted = Vec::with_capacity(candidates.len());
    for e in candidates {
        let mut m = fit(e, target, train.0, train.1)?;
        m.score(train, test)?;
        fitted.push(m);
    }
    let mut best = 0;
    for (i, m) in fitted.iter().enumerate().skip(1) {
        let (b, c) = (fitted[best].test_fidelity.unwrap(), m.test_fidelity.unwrap());
        if c > b || (c == b && m.engine.simplicity() < fitted[best].engine.simplicity()) {
            best = i;
        }
    }
    Ok(Selection {
        best: fitted[best].clone(),
        candidates: fitted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let x: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        let y = x.iter().map(|r| 2.0 * r[0]).collect();
        (x, y)
    }

    #[test]
    fn constant_labels_fit_constant_everywhere() {
        let (x, _) = line(20);
        let y = vec![0.5; 20];
        for e in EngineSpec::defaults(Target::Qor, 1).iter().skip(1) {
            let mut m = fit(e, Target::Qor, &x, &y).unwrap();
            assert!(m.is_constant());
            assert_eq!(m.predict(&[123.0]), 0.5);
            m.score((&x, &y), (&x, &y)).unwrap();
            assert_eq!(m.train_fidelity, Some(1.0));
        }
    }

    #[test]
    fn linear_toy_has_perfect_test_fidelity() {
        let (x, y) = line(30);
        let (xt, yt): (Vec<Vec<f64>>, Vec<f64>) = ((0..10).map(|i| vec![i as f64 + 0.5]).collect(), (0..10).map(|i| 2.0 * i as f64 + 1.0).collect());
        let mut m = fit(&EngineSpec::Linear, Target::Qor, &x, &y).unwrap();
        m.score((&x, &y), (&xt, &yt)).unwrap();
        assert_eq!(m.test_fidelity, Some(1.0));
    }

    #[test]
    fn naive_models_are_closed_form() {
        let (hw, qor) = naive_models();
        assert_eq!(qor.predict(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(qor.predict(&[1.0, 2.5]), -3.5);
        assert_eq!(hw.predict(&[10.0, 1.0, 2.0, 5.0, 3.0, 4.0]), 15.0);
        assert!(fit(&EngineSpec::NaiveHw, Target::Qor, &[], &[]).is_err());
    }

    #[test]
    fn selection_prefers_fidelity_then_simplicity() {
        let (x, y) = line(30);
        let s = select_model(&[EngineSpec::NaiveQor], Target::Qor, (&x, &y), (&x, &y)).unwrap();
        assert_eq!(s.best.engine, EngineSpec::NaiveQor);
        // Linear and forest both rank a line perfectly; linear is simpler.
        let cands = [EngineSpec::RandomForest(ForestParams { trees: 5, ..ForestParams::default() }), EngineSpec::Linear];
        let s = select_model(&cands, Target::Qor, (&x, &y), (&x, &y)).unwrap();
        assert_eq!(s.best.engine, EngineSpec::Linear);
        assert!(fit(&EngineSpec::Linear, Target::Qor, &x[..5], &y[..5]).is_err());
    }

    #[test]
    fn serialization_round_trip_predicts_identically() {
        let x: Vec<Vec<f64>> = (0..60).map(|i| vec![(i % 7) as f64 * 0.1, (i * 13 % 17) as f64 / 3.0]).collect();
        let y: Vec<f64> = x.iter().map(|r| (r[0] * 3.0).sin() + r[1].sqrt()).collect();
        let dir = tempfile::tempdir().unwrap();
        for e in EngineSpec::defaults(Target::Qor, 3) {
            let m = fit(&e, Target::Qor, &x, &y).unwrap();
            let p = dir.path().join("m.json");
            m.save(&p).unwrap();
            let back = TrainedModel::load(&p).unwrap();
            assert_eq!(back, m);
            for r in &x {
                assert_eq!(back.predict(r).to_bits(), m.predict(r).to_bits());
            }
        }
    }
}

//! Quality and hardware-cost estimation models, selected by fidelity.

mod cart;
mod features;
mod fidelity;
mod forest;
mod knn;
mod linear;
mod model;
mod sampling;

pub use cart::{RegressionTree, TreeNode, TreeParams};
pub use features::{FeatureSpec, Target};
pub use fidelity::{fidelity, Tie};
pub use forest::{ForestParams, RandomForest};
pub use knn::Knn;
pub use linear::Linear;
pub use model::{fit, naive_models, select_model, EngineSpec, Selection, TrainedModel, MIN_SAMPLES};
pub use sampling::{label, load_samples, sample_choices, sample_training_set, save_samples, Sample};

/// A model bound to the feature table of a reduced library.
pub struct SurrogateEstimator<'m> {
    pub model: &'m TrainedModel,
    pub features: FeatureSpec,
}

impl SurrogateEstimator<'_> {
    pub fn estimate(&self, choice: &[usize]) -> f64 {
        self.model.predict(&self.features.extract(choice))
    }
}

/// Feature matrix and labels of `samples` for `spec`'s target.
pub fn design_matrix(spec: &FeatureSpec, samples: &[Sample]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let x = samples.iter().map(|s| spec.extract(&s.choice)).collect();
    let y = samples
        .iter()
        .map(|s| match spec.target() {
            Target::Qor => s.labels.qor,
            Target::Hw => s.labels.area,
        })
        .collect();
    (x, y)
}

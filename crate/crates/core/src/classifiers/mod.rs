//! Binary classifiers used inside the classifier two-sample test.
//!
//! Both expose an estimate of `p(l = 1 | z)`; the test turns it into a hard
//! prediction with the rule `f(z) > 1/2`.

mod dataset;
mod knn;
mod mlp;

pub use dataset::LabeledDataset;
pub use knn::{default_k, KnnClassifier};
pub use mlp::{MlpClassifier, MlpHyperparams};

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub trait ProbabilisticClassifier {
    /// Estimated probability that `z` carries label 1.
    fn predict_proba(&self, z: &[f64]) -> Result<f64>;

    fn input_dim(&self) -> usize;
}

/// A trained classifier of either kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedClassifier {
    Mlp(MlpClassifier),
    Knn(KnnClassifier),
}

impl ProbabilisticClassifier for TrainedClassifier {
    fn predict_proba(&self, z: &[f64]) -> Result<f64> {
        match self {
            TrainedClassifier::Mlp(m) => m.predict_proba(z),
            TrainedClassifier::Knn(k) => k.predict_proba(z),
        }
    }

    fn input_dim(&self) -> usize {
        match self {
            TrainedClassifier::Mlp(m) => m.input_dim(),
            TrainedClassifier::Knn(k) => k.input_dim(),
        }
    }
}

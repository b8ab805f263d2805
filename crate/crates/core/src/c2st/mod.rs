//! The classifier two-sample test.
//!
//! 1. label the first sample 0 and the second 1 and pool them,
//! 2. shuffle the pooled rows once and split them into train and test parts,
//! 3. train a classifier on the training part,
//! 4. report its held-out accuracy `t̂` (prediction rule `f(z) > 1/2`),
//! 5. convert `t̂` into a p-value with the null law `Binomial(n_te, 1/2) / n_te`.
//!
//! The split is a plain uniform shuffle, not stratified, so the two classes
//! can be unevenly represented in either part. The null law only depends on
//! `n_te`, so the statistic stays valid.

mod interpret;
mod null;

pub use interpret::{interpret, FeatureReport, InterpretReport, RankedExample};
pub use null::{
    alternative_approx, null_approx, power, pvalue, pvalue_exact, pvalue_exact_two_sided, pvalue_two_sided, NullApprox,
    PowerQuery, EXACT_MAX_N,
};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::classifiers::{
    KnnClassifier, LabeledDataset, MlpClassifier, MlpHyperparams, ProbabilisticClassifier, TrainedClassifier,
};
use crate::error::{Error, Result};
use crate::numerics::Rng;
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Nn,
    Knn,
}

impl ClassifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Nn => "c2st-nn",
            ClassifierKind::Knn => "c2st-knn",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C2stConfig {
    pub classifier: ClassifierKind,
    /// Fraction of the pooled `2n` rows used for training.
    pub train_fraction: f64,
    pub alpha: f64,
    pub seed: u64,
    #[serde(default)]
    pub two_sided: bool,
    #[serde(default)]
    pub null: NullApprox,
    #[serde(default)]
    pub mlp: MlpHyperparams,
    /// Neighbour count; `⌊√n_tr⌋` when absent.
    #[serde(default)]
    pub knn_k: Option<usize>,
}

impl C2stConfig {
    pub fn new(classifier: ClassifierKind, seed: u64) -> Self {
        Self {
            classifier,
            train_fraction: 0.5,
            alpha: 0.05,
            seed,
            two_sided: false,
            null: NullApprox::Gaussian,
            mlp: MlpHyperparams::default(),
            knn_k: None,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_train_fraction(mut self, f: f64) -> Self {
        self.train_fraction = f;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Domain {
                what: "train fraction",
                value: self.train_fraction,
                expected: "0 < fraction < 1",
            });
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Domain {
                what: "significance level",
                value: self.alpha,
                expected: "0 <= alpha <= 1",
            });
        }
        Ok(())
    }

    /// Training/test sizes for a pooled dataset of `total` rows.
    pub fn split_sizes(&self, total: usize) -> Result<(usize, usize)> {
        self.validate()?;
        let n_tr = (self.train_fraction * total as f64).floor() as usize;
        let n_te = total - n_tr;
        if n_tr < 2 || n_te < 1 {
            return Err(Error::Config(format!(
                "split of {total} rows leaves {n_tr} training and {n_te} test rows"
            )));
        }
        Ok((n_tr, n_te))
    }
}

/// One held-out prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleRecord {
    /// Row of the pooled dataset: `0..n` is the first sample, `n..2n` the second.
    pub index: usize,
    pub label: u8,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C2stOutcome {
    pub statistic: f64,
    pub n_te: usize,
    /// Number of correct test predictions, `n_te · t̂`.
    pub correct: usize,
    pub p_value: f64,
    pub reject: bool,
    pub alpha: f64,
    pub classifier: ClassifierKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<ExampleRecord>,
}

/// Number of test predictions with `I(f(z) > 1/2) = l`.
pub fn correct_count(predictions: &[f64], labels: &[u8]) -> Result<usize> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: predictions.len(),
            got: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::TooFew { needed: 1, got: 0 });
    }
    Ok(predictions
        .iter()
        .zip(labels)
        .filter(|&(&p, &l)| u8::from(p > 0.5) == l)
        .count())
}

/// Held-out accuracy `t̂`.
pub fn statistic(predictions: &[f64], labels: &[u8]) -> Result<f64> {
    Ok(correct_count(predictions, labels)? as f64 / predictions.len() as f64)
}

/// Runs the test on two equally sized samples.
pub fn run(s_p: &Sample, s_q: &Sample, cfg: &C2stConfig) -> Result<C2stOutcome> {
    run_with_model(s_p, s_q, cfg).map(|(o, _)| o)
}

/// As [`run`], also returning the trained classifier.
pub fn run_with_model(s_p: &Sample, s_q: &Sample, cfg: &C2stConfig) -> Result<(C2stOutcome, TrainedClassifier)> {
    if s_p.dim() != s_q.dim() {
        return Err(Error::DimensionMismatch {
            expected: s_p.dim(),
            got: s_q.dim(),
        });
    }
    if s_p.len() != s_q.len() {
        return Err(Error::UnequalSizes {
            left: s_p.len(),
            right: s_q.len(),
        });
    }
    let data = LabeledDataset::from_two_samples(s_p, s_q)?;
    run_labeled(&data, cfg)
}

/// Runs the test on an already labelled pooled dataset.
pub fn run_labeled(data: &LabeledDataset, cfg: &C2stConfig) -> Result<(C2stOutcome, TrainedClassifier)> {
    let (n_tr, _) = cfg.split_sizes(data.len())?;
    let root = Rng::new(cfg.seed);

    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut root.child(0));
    let (train_idx, test_idx) = order.split_at(n_tr);

    let train = data.select(train_idx);
    if !train.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let model = match cfg.classifier {
        ClassifierKind::Nn => TrainedClassifier::Mlp(MlpClassifier::train(&mut root.child(1), &train, cfg.mlp)?),
        ClassifierKind::Knn => TrainedClassifier::Knn(KnnClassifier::fit(&train, cfg.knn_k)?),
    };

    let examples = test_idx
        .iter()
        .map(|&i| {
            Ok(ExampleRecord {
                index: i,
                label: data.labels()[i],
                probability: model.predict_proba(data.example(i))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let probs: Vec<f64> = examples.iter().map(|e| e.probability).collect();
    let labels: Vec<u8> = examples.iter().map(|e| e.label).collect();
    let correct = correct_count(&probs, &labels)?;
    let n_te = examples.len();
    let t_hat = correct as f64 / n_te as f64;

    let p_value = match (cfg.null, cfg.two_sided) {
        (NullApprox::Gaussian, false) => pvalue(t_hat, n_te),
        (NullApprox::Gaussian, true) => pvalue_two_sided(t_hat, n_te),
        (NullApprox::ExactBinomial, false) => pvalue_exact(correct, n_te)?,
        (NullApprox::ExactBinomial, true) => pvalue_exact_two_sided(correct, n_te)?,
    };

    let outcome = C2stOutcome {
        statistic: t_hat,
        n_te,
        correct,
        p_value,
        reject: p_value < cfg.alpha,
        alpha: cfg.alpha,
        classifier: cfg.classifier,
        seed: cfg.seed,
        examples,
    };
    Ok((outcome, model))
}

//! Where and how the two samples differ, read off a fitted test.

use serde::{Deserialize, Serialize};

use super::C2stOutcome;
use crate::classifiers::{LabeledDataset, TrainedClassifier};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedExample {
    pub index: usize,
    pub label: u8,
    pub probability: f64,
    /// `|f(z) − 1/2|`.
    pub confidence: f64,
    pub correct: bool,
}

/// First-layer features of the neural classifier.
///
/// The positive unit is the hidden unit whose mean activation over label-1
/// test examples exceeds its mean over label-0 examples by the most; the
/// negative unit is the reverse. The discriminative feature is the
/// difference of their incoming weight rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    /// Incoming weight rows of every hidden unit (hidden × d).
    pub first_layer: Vec<Vec<f64>>,
    pub mean_activation_label0: Vec<f64>,
    pub mean_activation_label1: Vec<f64>,
    pub positive_unit: usize,
    pub negative_unit: usize,
    pub positive_feature: Vec<f64>,
    pub negative_feature: Vec<f64>,
    pub discriminative_feature: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpretReport {
    /// Test examples, most confident first.
    pub ranked: Vec<RankedExample>,
    pub features: Option<FeatureReport>,
}

impl InterpretReport {
    /// The `count` examples the classifier most confidently assigns to `class`.
    pub fn most_confident(&self, class: u8, count: usize) -> Vec<&RankedExample> {
        self.ranked
            .iter()
            .filter(|r| u8::from(r.probability > 0.5) == class)
            .take(count)
            .collect()
    }

    /// The `count` least confident examples.
    pub fn least_confident(&self, count: usize) -> Vec<&RankedExample> {
        self.ranked.iter().rev().take(count).collect()
    }
}

/// Builds the report for a finished run. `data` is the pooled dataset the
/// outcome's example indices refer to.
pub fn interpret(
    outcome: &C2stOutcome,
    classifier: &TrainedClassifier,
    data: &LabeledDataset,
) -> Result<InterpretReport> {
    if let Some(bad) = outcome.examples.iter().find(|e| e.index >= data.len()) {
        return Err(Error::Config(format!(
            "example index {} outside the pooled data ({} rows)",
            bad.index,
            data.len()
        )));
    }
    let mut ranked: Vec<RankedExample> = outcome
        .examples
        .iter()
        .map(|e| RankedExample {
            index: e.index,
            label: e.label,
            probability: e.probability,
            confidence: (e.probability - 0.5).abs(),
            correct: u8::from(e.probability > 0.5) == e.label,
        })
        .collect();
    ranked.sort_by(|a, b| b.confidence.total_cmp(&a.confidence).then(a.index.cmp(&b.index)));

    let features = match classifier {
        TrainedClassifier::Knn(_) => None,
        TrainedClassifier::Mlp(mlp) => {
            let net = mlp.network();
            let h = net.hidden();
            let mut sums = [vec![0.0; h], vec![0.0; h]];
            let mut counts = [0usize; 2];
            for e in &outcome.examples {
                let act = mlp.hidden_activations(data.example(e.index))?;
                let c = usize::from(e.label);
                counts[c] += 1;
                for (s, a) in sums[c].iter_mut().zip(&act) {
                    *s += a;
                }
            }
            let means: Vec<Vec<f64>> = sums
                .iter()
                .zip(counts)
                .map(|(s, c)| s.iter().map(|v| v / c.max(1) as f64).collect())
                .collect();
            let diff: Vec<f64> = (0..h).map(|j| means[1][j] - means[0][j]).collect();
            let argmax = |v: &mut dyn Iterator<Item = f64>| {
                v.enumerate()
                    .fold(
                        (0, f64::NEG_INFINITY),
                        |best, (j, x)| {
                            if x > best.1 {
                                (j, x)
                            } else {
                                best
                            }
                        },
                    )
                    .0
            };
            let positive_unit = argmax(&mut diff.iter().copied());
            let negative_unit = argmax(&mut diff.iter().map(|d| -d));
            let positive_feature = net.w1_row(positive_unit).to_vec();
            let negative_feature = net.w1_row(negative_unit).to_vec();
            let discriminative_feature = positive_feature
                .iter()
                .zip(&negative_feature)
                .map(|(p, n)| p - n)
                .collect();
            Some(FeatureReport {
                first_layer: (0..h).map(|j| net.w1_row(j).to_vec()).collect(),
                mean_activation_label0: means[0].clone(),
                mean_activation_label1: means[1].clone(),
                positive_unit,
                negative_unit,
                positive_feature,
                negative_feature,
                discriminative_feature,
            })
        }
    };
    Ok(InterpretReport { ranked, features })
}

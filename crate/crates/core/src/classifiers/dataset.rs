use crate::error::{Error, Result};
use crate::sample::Sample;

/// Examples with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    examples: Sample,
    labels: Vec<u8>,
}

impl LabeledDataset {
    pub fn new(examples: Sample, labels: Vec<u8>) -> Result<Self> {
        if examples.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: examples.len(),
                got: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::Config(format!("label {bad} is not binary")));
        }
        Ok(Self { examples, labels })
    }

    /// `{(x_i, 0)} ∪ {(y_i, 1)}`, first sample first.
    pub fn from_two_samples(zero: &Sample, one: &Sample) -> Result<Self> {
        let examples = zero.stack(one)?;
        let mut labels = vec![0u8; zero.len()];
        labels.resize(zero.len() + one.len(), 1);
        Ok(Self { examples, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.examples.dim()
    }

    pub fn examples(&self) -> &Sample {
        &self.examples
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn example(&self, i: usize) -> &[f64] {
        self.examples.row(i)
    }

    pub fn select(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            examples: self.examples.select(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Same examples with every label flipped.
    pub fn flipped(&self) -> LabeledDataset {
        LabeledDataset {
            examples: self.examples.clone(),
            labels: self.labels.iter().map(|l| 1 - l).collect(),
        }
    }

    pub fn has_both_classes(&self) -> bool {
        self.labels.contains(&0) && self.labels.contains(&1)
    }
}

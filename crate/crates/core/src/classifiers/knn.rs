use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{LabeledDataset, ProbabilisticClassifier};
use crate::error::{Error, Result};

/// `⌊√n_tr⌋`, at least 1.
pub fn default_k(n_train: usize) -> usize {
    ((n_train as f64).sqrt().floor() as usize).max(1)
}

/// k-nearest-neighbour voter under Euclidean distance.
///
/// The prediction is the fraction of label-1 examples among the `k` nearest
/// stored rows. Rows at equal distance are ordered by their stored index, so
/// the lower index wins a tie at the k-th position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnClassifier {
    dim: usize,
    k: usize,
    examples: Vec<f64>,
    labels: Vec<u8>,
}

impl KnnClassifier {
    pub fn fit(data: &LabeledDataset, k: Option<usize>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::TooFew { needed: 1, got: 0 });
        }
        let k = k.unwrap_or_else(|| default_k(data.len()));
        if k == 0 || k > data.len() {
            return Err(Error::Config(format!("k = {k} must lie in 1..={}", data.len())));
        }
        Ok(Self {
            dim: data.dim(),
            k,
            examples: data.examples().as_slice().to_vec(),
            labels: data.labels().to_vec(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.dim
    }

    /// Indices of the `k` nearest stored rows, nearest first.
    pub fn neighbours(&self, z: &[f64]) -> Result<Vec<usize>> {
        let mut cand = self.ranked(z)?;
        cand.truncate(self.k);
        cand.sort_unstable_by(by_distance_then_index);
        Ok(cand.into_iter().map(|(_, i)| i).collect())
    }

    fn ranked(&self, z: &[f64]) -> Result<Vec<(f64, usize)>> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        let mut cand: Vec<(f64, usize)> = self
            .examples
            .chunks_exact(self.dim)
            .enumerate()
            .map(|(i, row)| {
                let d2 = row.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
                (d2, i)
            })
            .collect();
        if self.k < cand.len() {
            cand.select_nth_unstable_by(self.k - 1, by_distance_then_index);
        }
        Ok(cand)
    }
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

impl ProbabilisticClassifier for KnnClassifier {
    fn predict_proba(&self, z: &[f64]) -> Result<f64> {
        let cand = self.ranked(z)?;
        let ones = cand[..self.k].iter().filter(|&&(_, i)| self.labels[i] == 1).count();
        Ok(ones as f64 / self.k as f64)
    }

    fn input_dim(&self) -> usize {
        self.dim
    }
}

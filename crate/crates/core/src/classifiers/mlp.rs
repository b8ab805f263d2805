use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{LabeledDataset, ProbabilisticClassifier};
use crate::error::{Error, Result};
use crate::nn::{bce, sigmoid, Adam, AdamConfig, OneHiddenLayer};
use crate::numerics::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpHyperparams {
    pub hidden: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    /// Weight each class by `n / (2 n_c)` in the loss. A uniform split
    /// leaves the training part slightly imbalanced and the test part
    /// imbalanced the other way; an unweighted net learns that prior and
    /// scores below chance under the null.
    #[serde(default = "yes")]
    pub balance_classes: bool,
}

fn yes() -> bool {
    true
}

impl Default for MlpHyperparams {
    fn default() -> Self {
        Self {
            hidden: 20,
            epochs: 100,
            batch_size: 128,
            adam: AdamConfig::default(),
            balance_classes: true,
        }
    }
}

/// One hidden layer of ReLU units followed by a sigmoid output, trained with
/// binary cross-entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpClassifier {
    net: OneHiddenLayer,
    optimizer: Adam,
    hyper: MlpHyperparams,
}

impl MlpClassifier {
    /// Freshly initialized, untrained network.
    pub fn init(rng: &mut Rng, input_dim: usize, hyper: MlpHyperparams) -> Self {
        let net = OneHiddenLayer::glorot(rng, input_dim, hyper.hidden);
        let optimizer = Adam::new(hyper.adam, net.params().len());
        Self { net, optimizer, hyper }
    }

    pub fn from_network(net: OneHiddenLayer, hyper: MlpHyperparams) -> Self {
        let optimizer = Adam::new(hyper.adam, net.params().len());
        Self { net, optimizer, hyper }
    }

    pub fn network(&self) -> &OneHiddenLayer {
        &self.net
    }

    pub fn network_mut(&mut self) -> &mut OneHiddenLayer {
        &mut self.net
    }

    pub fn hyperparams(&self) -> &MlpHyperparams {
        &self.hyper
    }

    pub fn optimizer_steps(&self) -> u64 {
        self.optimizer.steps()
    }

    /// Weights in the flat export order `W1 (row-major), b1, w2, b2`.
    pub fn flat_weights(&self) -> &[f64] {
        self.net.params()
    }

    fn check_dim(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.net.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.net.input_dim(),
                got: z.len(),
            });
        }
        Ok(())
    }

    /// `σ(w2 · relu(W1 z + b1) + b2)`.
    pub fn forward(&self, z: &[f64]) -> Result<f64> {
        self.check_dim(z)?;
        let mut act = vec![0.0; self.net.hidden()];
        Ok(sigmoid(self.net.forward(z, &mut act)))
    }

    /// Hidden-layer ReLU activations for `z`.
    pub fn hidden_activations(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(z)?;
        let mut act = vec![0.0; self.net.hidden()];
        self.net.forward(z, &mut act);
        Ok(act)
    }

    /// Mean binary cross-entropy over `batch` and its exact gradient, with
    /// the batch's own class weights when classes are balanced.
    pub fn loss_grad(&self, batch: &LabeledDataset) -> Result<(f64, Vec<f64>)> {
        if batch.is_empty() {
            return Err(Error::TooFew { needed: 1, got: 0 });
        }
        if batch.dim() != self.net.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.net.input_dim(),
                got: batch.dim(),
            });
        }
        let idx: Vec<usize> = (0..batch.len()).collect();
        let mut grad = vec![0.0; self.net.params().len()];
        let mut act = vec![0.0; self.net.hidden()];
        let weights = self.class_weights(batch);
        let loss = self.accumulate(batch, &idx, weights, &mut grad, &mut act);
        Ok((loss, grad))
    }

    /// Loss weights of labels 0 and 1.
    fn class_weights(&self, data: &LabeledDataset) -> [f64; 2] {
        let ones = data.labels().iter().filter(|&&l| l == 1).count();
        let zeros = data.len() - ones;
        if !self.hyper.balance_classes || ones == 0 || zeros == 0 {
            return [1.0, 1.0];
        }
        let n = data.len() as f64;
        [n / (2.0 * zeros as f64), n / (2.0 * ones as f64)]
    }

    /// Weighted mean loss over `idx`, writing the gradient into `grad`.
    fn accumulate(
        &self,
        data: &LabeledDataset,
        idx: &[usize],
        weights: [f64; 2],
        grad: &mut [f64],
        act: &mut [f64],
    ) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let scale = 1.0 / idx.len() as f64;
        let mut loss = 0.0;
        for &i in idx {
            let z = data.example(i);
            let w = weights[usize::from(data.labels()[i])];
            let label = f64::from(data.labels()[i]);
            let p = sigmoid(self.net.forward(z, act));
            loss += w * bce(p, label);
            self.net.backward(z, act, w * (p - label) * scale, grad, None);
        }
        loss * scale
    }

    /// Trains a new classifier with mini-batch Adam.
    ///
    /// Batches are drawn from a fresh shuffle every epoch; the whole training
    /// set forms one batch when it is smaller than the batch size.
    pub fn train(rng: &mut Rng, data: &LabeledDataset, hyper: MlpHyperparams) -> Result<Self> {
        if data.len() < 2 {
            return Err(Error::TooFew {
                needed: 2,
                got: data.len(),
            });
        }
        if !data.has_both_classes() {
            return Err(Error::SingleClass);
        }
        if hyper.hidden == 0 || hyper.batch_size == 0 {
            return Err(Error::Config("hidden width and batch size must be positive".into()));
        }
        let mut model = Self::init(rng, data.dim(), hyper);
        model.fit(rng, data, hyper.epochs)?;
        Ok(model)
    }

    /// Continues training for `epochs` passes over `data`.
    pub fn fit(&mut self, rng: &mut Rng, data: &LabeledDataset, epochs: usize) -> Result<()> {
        let mut order: Vec<usize> = (0..data.len()).collect();
        let mut grad = vec![0.0; self.net.params().len()];
        let mut act = vec![0.0; self.net.hidden()];
        let batch = self.hyper.batch_size.min(data.len());
        let weights = self.class_weights(data);
        for _ in 0..epochs {
            order.shuffle(rng);
            for chunk in order.chunks(batch) {
                self.accumulate(data, chunk, weights, &mut grad, &mut act);
                self.optimizer.step(self.net.params_mut(), &grad);
                if !self.net.is_finite() {
                    return Err(Error::Diverged {
                        step: self.optimizer.steps() as usize,
                    });
                }
            }
        }
        Ok(())
    }
}

impl ProbabilisticClassifier for MlpClassifier {
    fn predict_proba(&self, z: &[f64]) -> Result<f64> {
        self.forward(z)
    }

    fn input_dim(&self) -> usize {
        self.net.input_dim()
    }
}

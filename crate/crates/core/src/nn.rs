//! One-hidden-layer ReLU network and the Adam optimizer.
//!
//! Shared by the C2ST neural classifier and by both halves of the conditional
//! GAN. Parameters live in one flat vector so optimizers, gradient checks and
//! serialization all see the same layout:
//!
//! ```text
//! [ W1 (hidden × input, row-major) | b1 (hidden) | w2 (hidden) | b2 ]
//! ```

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::numerics::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneHiddenLayer {
    input_dim: usize,
    hidden: usize,
    params: Vec<f64>,
}

impl OneHiddenLayer {
    pub fn zeros(input_dim: usize, hidden: usize) -> Self {
        Self {
            input_dim,
            hidden,
            params: vec![0.0; Self::param_count(input_dim, hidden)],
        }
    }

    /// Uniform init in ±sqrt(6 / (fan_in + fan_out)) for both weight layers, zero biases.
    pub fn glorot(rng: &mut Rng, input_dim: usize, hidden: usize) -> Self {
        let mut net = Self::zeros(input_dim, hidden);
        let a1 = (6.0 / (input_dim + hidden) as f64).sqrt();
        for w in net.w1_mut() {
            *w = rng.gen_range(-a1..a1);
        }
        let a2 = (6.0 / (hidden + 1) as f64).sqrt();
        let off = net.w2_offset();
        for w in &mut net.params[off..off + hidden] {
            *w = rng.gen_range(-a2..a2);
        }
        net
    }

    pub fn from_params(input_dim: usize, hidden: usize, params: Vec<f64>) -> Option<Self> {
        (params.len() == Self::param_count(input_dim, hidden)).then_some(Self {
            input_dim,
            hidden,
            params,
        })
    }

    pub fn param_count(input_dim: usize, hidden: usize) -> usize {
        hidden * input_dim + 2 * hidden + 1
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn b1_offset(&self) -> usize {
        self.hidden * self.input_dim
    }

    fn w2_offset(&self) -> usize {
        self.b1_offset() + self.hidden
    }

    fn b2_offset(&self) -> usize {
        self.w2_offset() + self.hidden
    }

    fn w1_mut(&mut self) -> &mut [f64] {
        let end = self.b1_offset();
        &mut self.params[..end]
    }

    /// Incoming weights of hidden unit `j`.
    pub fn w1_row(&self, j: usize) -> &[f64] {
        &self.params[j * self.input_dim..(j + 1) * self.input_dim]
    }

    pub fn b2(&self) -> f64 {
        self.params[self.b2_offset()]
    }

    pub fn set_b2(&mut self, v: f64) {
        let off = self.b2_offset();
        self.params[off] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }

    /// Output pre-activation. `act` receives the hidden ReLU activations.
    pub fn forward(&self, x: &[f64], act: &mut [f64]) -> f64 {
        debug_assert_eq!(x.len(), self.input_dim);
        let (w1, rest) = self.params.split_at(self.b1_offset());
        let (b1, rest) = rest.split_at(self.hidden);
        let (w2, b2) = rest.split_at(self.hidden);
        let mut out = b2[0];
        for j in 0..self.hidden {
            let row = &w1[j * self.input_dim..(j + 1) * self.input_dim];
            let pre = b1[j] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
            let a = pre.max(0.0);
            act[j] = a;
            out += w2[j] * a;
        }
        out
    }

    /// Accumulates `dout · ∂out/∂θ` into `grad`, and optionally `dout · ∂out/∂x` into `dx`.
    pub fn backward(&self, x: &[f64], act: &[f64], dout: f64, grad: &mut [f64], mut dx: Option<&mut [f64]>) {
        let (b1_off, w2_off, b2_off) = (self.b1_offset(), self.w2_offset(), self.b2_offset());
        grad[b2_off] += dout;
        for j in 0..self.hidden {
            grad[w2_off + j] += dout * act[j];
            if act[j] <= 0.0 {
                continue;
            }
            let dpre = dout * self.params[w2_off + j];
            grad[b1_off + j] += dpre;
            let row = j * self.input_dim;
            for (k, &v) in x.iter().enumerate() {
                grad[row + k] += dpre * v;
            }
            if let Some(dx) = dx.as_deref_mut() {
                for (k, d) in dx.iter_mut().enumerate() {
                    *d += dpre * self.params[row + k];
                }
            }
        }
    }
}

/// Logistic function, evaluated without overflow for large |x|.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Clamp used before taking logs in the cross-entropy.
pub const PROB_CLAMP: f64 = 1e-12;

/// Binary cross-entropy of predicted probability `p` against label `l ∈ {0, 1}`.
pub fn bce(p: f64, label: f64) -> f64 {
    let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
    -(label * p.ln() + (1.0 - label) * (1.0 - p).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Adam state: first and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    pub config: AdamConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(config: AdamConfig, n_params: usize) -> Self {
        Self {
            config,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            t: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        self.t += 1;
        let c1 = 1.0 - beta1.powi(self.t as i32);
        let c2 = 1.0 - beta2.powi(self.t as i32);
        for (((p, g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = beta1 * *m + (1.0 - beta1) * g;
            *v = beta2 * *v + (1.0 - beta2) * g * g;
            *p -= learning_rate * (*m / c1) / ((*v / c2).sqrt() + epsilon);
        }
    }
}

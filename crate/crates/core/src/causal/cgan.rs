//! Conditional GAN for one scalar variable given another.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{bce, sigmoid, Adam, AdamConfig, OneHiddenLayer};
use crate::numerics::Rng;
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CganHyperparams {
    /// Hidden ReLU units of both networks.
    pub hidden: usize,
    pub iterations: usize,
    pub batch_size: usize,
    /// Discriminator updates per generator update.
    pub d_steps: usize,
    pub adam: AdamConfig,
}

impl Default for CganHyperparams {
    fn default() -> Self {
        Self {
            hidden: 32,
            iterations: 3000,
            batch_size: 64,
            d_steps: 1,
            adam: AdamConfig::default(),
        }
    }
}

/// Generator `g(c, z)` with a linear output and discriminator `d(c, v)` with
/// a sigmoid output, each one hidden ReLU layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cgan {
    generator: OneHiddenLayer,
    discriminator: OneHiddenLayer,
    g_opt: Adam,
    d_opt: Adam,
    hyper: CganHyperparams,
}

/// Minimum number of pairs accepted for training.
pub const MIN_PAIRS: usize = 50;

impl Cgan {
    pub fn init(rng: &mut Rng, hyper: CganHyperparams) -> Self {
        let generator = OneHiddenLayer::glorot(rng, 2, hyper.hidden);
        let discriminator = OneHiddenLayer::glorot(rng, 2, hyper.hidden);
        Self {
            g_opt: Adam::new(hyper.adam, generator.params().len()),
            d_opt: Adam::new(hyper.adam, discriminator.params().len()),
            generator,
            discriminator,
            hyper,
        }
    }

    pub fn from_networks(
        generator: OneHiddenLayer,
        discriminator: OneHiddenLayer,
        hyper: CganHyperparams,
    ) -> Result<Self> {
        for net in [&generator, &discriminator] {
            if net.input_dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: net.input_dim(),
                });
            }
        }
        Ok(Self {
            g_opt: Adam::new(hyper.adam, generator.params().len()),
            d_opt: Adam::new(hyper.adam, discriminator.params().len()),
            generator,
            discriminator,
            hyper,
        })
    }

    pub fn generator(&self) -> &OneHiddenLayer {
        &self.generator
    }

    pub fn discriminator(&self) -> &OneHiddenLayer {
        &self.discriminator
    }

    pub fn generator_mut(&mut self) -> &mut OneHiddenLayer {
        &mut self.generator
    }

    pub fn discriminator_mut(&mut self) -> &mut OneHiddenLayer {
        &mut self.discriminator
    }

    pub fn hyperparams(&self) -> &CganHyperparams {
        &self.hyper
    }

    /// `g(c, z)`.
    pub fn generate(&self, c: f64, z: f64) -> f64 {
        let mut act = vec![0.0; self.generator.hidden()];
        self.generator.forward(&[c, z], &mut act)
    }

    /// `d(c, v)`, the probability that `(c, v)` is real.
    pub fn discriminate(&self, c: f64, v: f64) -> f64 {
        let mut act = vec![0.0; self.discriminator.hidden()];
        sigmoid(self.discriminator.forward(&[c, v], &mut act))
    }

    /// Discriminator loss `mean ℓ(d(real), 1) ∪ ℓ(d(fake), 0)` over all
    /// `(c, v)` pairs given, and its gradient in the discriminator's
    /// parameters.
    pub fn discriminator_loss_grad(&self, real: &[[f64; 2]], fake: &[[f64; 2]]) -> (f64, Vec<f64>) {
        let d = &self.discriminator;
        let mut grad = vec![0.0; d.params().len()];
        let mut act = vec![0.0; d.hidden()];
        let scale = 1.0 / (real.len() + fake.len()).max(1) as f64;
        let mut loss = 0.0;
        for (rows, label) in [(real, 1.0), (fake, 0.0)] {
            for x in rows {
                let p = sigmoid(d.forward(x, &mut act));
                loss += bce(p, label);
                d.backward(x, &act, (p - label) * scale, &mut grad, None);
            }
        }
        (loss * scale, grad)
    }

    /// Non-saturating generator loss `mean ℓ(d(c, g(c, z)), 1)` and its
    /// gradient in the generator's parameters.
    pub fn generator_loss_grad(&self, cond: &[f64], noise: &[f64]) -> (f64, Vec<f64>) {
        let (g, d) = (&self.generator, &self.discriminator);
        let mut grad = vec![0.0; g.params().len()];
        let mut scratch = vec![0.0; d.params().len()];
        let mut g_act = vec![0.0; g.hidden()];
        let mut d_act = vec![0.0; d.hidden()];
        let scale = 1.0 / cond.len().max(1) as f64;
        let mut loss = 0.0;
        for (&c, &z) in cond.iter().zip(noise) {
            let v = g.forward(&[c, z], &mut g_act);
            let x = [c, v];
            let p = sigmoid(d.forward(&x, &mut d_act));
            loss += bce(p, 1.0);
            let mut dx = [0.0; 2];
            d.backward(&x, &d_act, (p - 1.0) * scale, &mut scratch, Some(&mut dx));
            g.backward(&[c, z], &g_act, dx[1], &mut grad, None);
        }
        (loss * scale, grad)
    }

    /// Runs `iterations` alternating updates on `(cond, target)` pairs.
    pub fn fit(&mut self, rng: &mut Rng, cond: &[f64], target: &[f64], iterations: usize) -> Result<()> {
        let n = cond.len();
        let b = self.hyper.batch_size.min(n);
        let mut real = vec![[0.0; 2]; b];
        let mut fake = vec![[0.0; 2]; b];
        let mut c = vec![0.0; b];
        let mut z = vec![0.0; b];
        for it in 0..iterations {
            for _ in 0..self.hyper.d_steps {
                for k in 0..b {
                    let i = rng.gen_range(0..n);
                    real[k] = [cond[i], target[i]];
                    let j = rng.gen_range(0..n);
                    let zz: f64 = rng.sample(StandardNormal);
                    fake[k] = [cond[j], self.generate(cond[j], zz)];
                }
                let (_, grad) = self.discriminator_loss_grad(&real, &fake);
                self.d_opt.step(self.discriminator.params_mut(), &grad);
            }
            for k in 0..b {
                c[k] = cond[rng.gen_range(0..n)];
                z[k] = rng.sample(StandardNormal);
            }
            let (_, grad) = self.generator_loss_grad(&c, &z);
            self.g_opt.step(self.generator.params_mut(), &grad);
            if !(self.generator.is_finite() && self.discriminator.is_finite()) {
                return Err(Error::Diverged { step: it + 1 });
            }
        }
        Ok(())
    }
}

/// Trains a CGAN modelling column `target` given column `cond` of `pairs`.
/// The columns are expected to be standardized.
pub fn cgan_train(rng: &mut Rng, pairs: &Sample, cond: usize, target: usize, hyper: CganHyperparams) -> Result<Cgan> {
    if pairs.dim() != 2 || cond > 1 || target > 1 || cond == target {
        return Err(Error::Config(format!(
            "expected a two-column sample and distinct columns, got dim {} and columns ({cond}, {target})",
            pairs.dim()
        )));
    }
    if pairs.len() < MIN_PAIRS {
        return Err(Error::TooFew {
            needed: MIN_PAIRS,
            got: pairs.len(),
        });
    }
    if hyper.hidden == 0 || hyper.batch_size == 0 || hyper.d_steps == 0 {
        return Err(Error::Config(
            "hidden width, batch size and discriminator steps must be positive".into(),
        ));
    }
    let mut model = Cgan::init(rng, hyper);
    model.fit(rng, &pairs.column(cond), &pairs.column(target), hyper.iterations)?;
    Ok(model)
}

/// One synthetic pair `(c_i, g(c_i, z_i))` per conditioning value, with
/// fresh standard normal noise.
pub fn cgan_synthesize(model: &Cgan, cond: &[f64], rng: &mut Rng) -> Result<Sample> {
    let mut data = Vec::with_capacity(2 * cond.len());
    for &c in cond {
        let z: f64 = rng.sample(StandardNormal);
        data.push(c);
        data.push(model.generate(c, z));
    }
    Sample::new(cond.len(), 2, data)
}

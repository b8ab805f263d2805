//! Independent reference computations shared by the integration tests and
//! the acceptance suite.

#![allow(dead_code)]

use c2st::causal::{Cgan, CganHyperparams};
use c2st::classifiers::{LabeledDataset, MlpClassifier, MlpHyperparams};
use c2st::numerics::{sample_normal, Rng};
use c2st::Sample;
use rand::Rng as _;

/// (D⁺, D⁻, U_P) by direct enumeration over the pooled grid and all pairs.
pub fn brute(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let (n, m) = (x.len() as f64, y.len() as f64);
    let mut d_plus = 0.0f64;
    let mut d_minus = 0.0f64;
    for &t in x.iter().chain(y) {
        let fx = x.iter().filter(|&&v| v <= t).count() as f64 / n;
        let fy = y.iter().filter(|&&v| v <= t).count() as f64 / m;
        d_plus = d_plus.max(fx - fy);
        d_minus = d_minus.max(fy - fx);
    }
    let mut u = 0.0;
    for &a in x {
        for &b in y {
            if a > b {
                u += 1.0;
            } else if a == b {
                u += 0.5;
            }
        }
    }
    (d_plus, d_minus, u)
}

/// Exact permutation p-values of (KS, two-sided WMW) from all bitmask splits.
pub fn permutation_oracle(x: &[f64], y: &[f64]) -> (f64, f64) {
    let pool: Vec<f64> = x.iter().chain(y).copied().collect();
    let total = pool.len();
    let n = x.len();
    let (dp, dm, u) = brute(x, y);
    let d_obs = dp.max(dm);
    let centre = (n * y.len()) as f64 / 2.0;
    let u_obs = (u - centre).abs();
    let (mut ks_hits, mut wmw_hits, mut count) = (0, 0, 0);
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let a: Vec<f64> = (0..total).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
        let b: Vec<f64> = (0..total).filter(|i| mask >> i & 1 == 0).map(|i| pool[i]).collect();
        let (p, q, uu) = brute(&a, &b);
        count += 1;
        if p.max(q) >= d_obs - 1e-9 {
            ks_hits += 1;
        }
        if (uu - centre).abs() >= u_obs - 1e-9 {
            wmw_hits += 1;
        }
    }
    (ks_hits as f64 / count as f64, wmw_hits as f64 / count as f64)
}

/// Two small non-constant samples on a coarse integer grid, so that ties
/// are common, with `n + m <= max_total`.
pub fn small_instance(rng: &mut Rng, max_total: usize) -> (Vec<f64>, Vec<f64>) {
    loop {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(2..=12);
        if n + m > max_total {
            continue;
        }
        let shift = rng.gen_range(0..3) as f64;
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.gen_range(0..8) as f64 + shift).collect();
        if x.iter().chain(&y).any(|&v| v != x[0]) {
            return (x, y);
        }
    }
}

/// `P(X ≥ k)` for `X ~ Binomial(n, 1/2)`, summing the pmf by recurrence.
pub fn binomial_half_tail(k: usize, n: usize) -> f64 {
    let mut pmf = 0.5f64.powi(n as i32);
    let mut tail = 0.0;
    for j in 0..=n {
        if j >= k {
            tail += pmf;
        }
        pmf *= (n - j) as f64 / (j + 1) as f64;
    }
    tail
}

const H: f64 = 1e-5;

/// Redrawn configurations allowed per gradient check before it gives up.
pub const MAX_KINKED: usize = 10;

/// Central differences of `f` at `params` with step `h`.
fn central(params: &[f64], h: f64, f: &impl Fn(&[f64]) -> f64) -> Vec<f64> {
    let mut p = params.to_vec();
    (0..p.len())
        .map(|i| {
            let orig = p[i];
            p[i] = orig + h;
            let up = f(&p);
            p[i] = orig - h;
            let down = f(&p);
            p[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Central differences at step `H`, or `None` when a ReLU kink lies inside
/// the stencil (the step-`H/10` estimate disagrees).
fn numeric_grad(params: &[f64], f: impl Fn(&[f64]) -> f64) -> Option<Vec<f64>> {
    let coarse = central(params, H, &f);
    let fine = central(params, H / 10.0, &f);
    (relative_error(&coarse, &fine) < 1e-6).then_some(coarse)
}

/// `‖a − b‖ / max(‖a‖ + ‖b‖, 1e-12)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &mut dyn Iterator<Item = f64>| v.map(|x| x * x).sum::<f64>().sqrt();
    let diff = norm(&mut a.iter().zip(b).map(|(x, y)| x - y));
    diff / (norm(&mut a.iter().copied()) + norm(&mut b.iter().copied())).max(1e-12)
}

#[derive(Debug, Clone, Copy)]
pub struct GradCheck {
    pub checked: usize,
    pub kinked: usize,
    pub worst: f64,
}

impl GradCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.kinked <= MAX_KINKED && self.worst < tol
    }
}

/// Draws configurations until `cases` of them have a kink-free numeric
/// gradient (or too many are kinked) and records the worst relative error.
/// `draw` returns (analytic, numeric) for one configuration.
fn check(cases: usize, mut draw: impl FnMut() -> (Vec<f64>, Option<Vec<f64>>)) -> GradCheck {
    let mut out = GradCheck {
        checked: 0,
        kinked: 0,
        worst: 0.0,
    };
    while out.checked < cases && out.kinked <= MAX_KINKED {
        match draw() {
            (analytic, Some(numeric)) => {
                out.checked += 1;
                out.worst = out.worst.max(relative_error(&analytic, &numeric));
            }
            (_, None) => out.kinked += 1,
        }
    }
    out
}

pub fn check_mlp_gradient(seed: u64, cases: usize) -> GradCheck {
    let mut rng = Rng::new(seed);
    check(cases, || {
        let d = rng.gen_range(1..6);
        let hidden = rng.gen_range(1..12);
        let n = rng.gen_range(2..40);
        let x = sample_normal(&mut rng, n * d, 0.0, 1.5).unwrap().into_vec();
        let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let data = LabeledDataset::new(Sample::new(n, d, x).unwrap(), labels).unwrap();
        let hyper = MlpHyperparams {
            hidden,
            ..Default::default()
        };
        let model = MlpClassifier::init(&mut rng, d, hyper);
        let (_, analytic) = model.loss_grad(&data).unwrap();
        let numeric = numeric_grad(model.network().params(), |p| {
            let mut m = model.clone();
            m.network_mut().params_mut().copy_from_slice(p);
            m.loss_grad(&data).unwrap().0
        });
        (analytic, numeric)
    })
}

fn random_cgan(rng: &mut Rng) -> Cgan {
    let hyper = CganHyperparams {
        hidden: rng.gen_range(1..33),
        ..Default::default()
    };
    Cgan::init(rng, hyper)
}

pub fn check_discriminator_gradient(seed: u64, cases: usize) -> GradCheck {
    let mut rng = Rng::new(seed);
    check(cases, || {
        let model = random_cgan(&mut rng);
        let mut pairs = |k: usize| -> Vec<[f64; 2]> {
            (0..k)
                .map(|_| [rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0)])
                .collect()
        };
        let real = pairs(17);
        let fake = pairs(9);
        let (_, analytic) = model.discriminator_loss_grad(&real, &fake);
        let numeric = numeric_grad(model.discriminator().params(), |p| {
            let mut m = model.clone();
            m.discriminator_mut().params_mut().copy_from_slice(p);
            m.discriminator_loss_grad(&real, &fake).0
        });
        (analytic, numeric)
    })
}

pub fn check_generator_gradient(seed: u64, cases: usize) -> GradCheck {
    let mut rng = Rng::new(seed);
    check(cases, || {
        let model = random_cgan(&mut rng);
        let k = rng.gen_range(1..30);
        let cond = sample_normal(&mut rng, k, 0.0, 1.0).unwrap().into_vec();
        let noise = sample_normal(&mut rng, k, 0.0, 1.0).unwrap().into_vec();
        let (_, analytic) = model.generator_loss_grad(&cond, &noise);
        let numeric = numeric_grad(model.generator().params(), |p| {
            let mut m = model.clone();
            m.generator_mut().params_mut().copy_from_slice(p);
            m.generator_loss_grad(&cond, &noise).0
        });
        (analytic, numeric)
    })
}

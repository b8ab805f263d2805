use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::Rng;
use crate::error::{Error, Result};
use crate::sample::Sample;

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::TooFew { needed: 1, got: 0 });
    }
    Ok(())
}

/// `n` i.i.d. draws from `N(mean, sd²)` as an `n × 1` sample.
pub fn sample_normal(rng: &mut Rng, n: usize, mean: f64, sd: f64) -> Result<Sample> {
    check_count(n)?;
    if !(sd > 0.0) || !sd.is_finite() || !mean.is_finite() {
        return Err(Error::Domain {
            what: "normal scale",
            value: sd,
            expected: "finite sd > 0",
        });
    }
    let values = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            mean + sd * z
        })
        .collect();
    Sample::from_column(values)
}

/// `n` i.i.d. Student-t(ν) draws built as `Z / sqrt(V / ν)` with `V ~ χ²(ν)`.
pub fn sample_student_t(rng: &mut Rng, n: usize, nu: f64) -> Result<Sample> {
    check_count(n)?;
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain {
            what: "degrees of freedom",
            value: nu,
            expected: "nu > 0",
        });
    }
    let chi = ChiSquared::new(nu).map_err(|_| Error::Domain {
        what: "degrees of freedom",
        value: nu,
        expected: "nu > 0",
    })?;
    let values = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            let v = chi.sample(rng);
            z / (v / nu).sqrt()
        })
        .collect();
    Sample::from_column(values)
}

/// Paired draws `x ~ N(0,1)`, `y = cos(δ x) + ε` with `ε ~ N(0, γ²)`.
pub fn sample_sinusoid(rng: &mut Rng, n: usize, delta: f64, gamma: f64) -> Result<Sample> {
    check_count(n)?;
    if !(gamma >= 0.0) || !gamma.is_finite() || !delta.is_finite() {
        return Err(Error::Domain {
            what: "sinusoid noise",
            value: gamma,
            expected: "finite gamma >= 0",
        });
    }
    let mut data = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let x: f64 = StandardNormal.sample(rng);
        let e: f64 = StandardNormal.sample(rng);
        data.push(x);
        data.push((delta * x).cos() + gamma * e);
    }
    Sample::new(n, 2, data)
}

/// Shifts and scales every column to empirical mean 0 and variance 1.
///
/// Uses the population variance (divide by `n`).
pub fn standardize(s: &Sample) -> Result<Sample> {
    let mut data = s.as_slice().to_vec();
    standardize_in_place(&mut data, s.dim())?;
    Sample::new(s.len(), s.dim(), data)
}

/// Row-major in-place version of [`standardize`].
pub fn standardize_in_place(data: &mut [f64], cols: usize) -> Result<()> {
    let n = data.len() / cols;
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    for j in 0..cols {
        let mean = (0..n).map(|i| data[i * cols + j]).sum::<f64>() / n as f64;
        let var = (0..n).map(|i| (data[i * cols + j] - mean).powi(2)).sum::<f64>() / n as f64;
        // relative to the column scale, so a column like [1e9, 1e9 + 1e-7] still counts as constant
        let scale = (0..n).map(|i| data[i * cols + j].abs()).fold(0.0, f64::max);
        if !(var > (scale * f64::EPSILON).powi(2) * 16.0) {
            return Err(Error::DegenerateColumn { col: j });
        }
        let sd = var.sqrt();
        for i in 0..n {
            data[i * cols + j] = (data[i * cols + j] - mean) / sd;
        }
    }
    Ok(())
}

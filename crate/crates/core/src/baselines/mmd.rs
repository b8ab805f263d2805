//! Linear-time maximum mean discrepancy with a Gaussian kernel.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{normal_sf, Rng};
use crate::outcome::{TestKind, TestOutcome};
use crate::sample::Sample;

/// Pooled points used by the median heuristic.
pub const MEDIAN_MAX_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelConfig {
    /// `σ` = median pairwise distance of the pooled sample.
    #[default]
    MedianHeuristic,
    Bandwidth(f64),
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelConfig::Bandwidth(s) if !(s > 0.0 && s.is_finite()) => Err(Error::Domain {
                what: "kernel bandwidth",
                value: s,
                expected: "sigma > 0",
            }),
            _ => Ok(()),
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

/// `exp(−‖a − b‖² / (2σ²))`.
pub fn gaussian_kernel(a: &[f64], b: &[f64], sigma: f64) -> f64 {
    (-sq_dist(a, b) / (2.0 * sigma * sigma)).exp()
}

/// Median Euclidean distance over all pairs of `rows` (upper median for an
/// even number of pairs). Falls back to the mean distance when more than
/// half the pairs coincide, and to 1 when every point coincides.
pub fn median_distance(rows: &[&[f64]]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: rows.len(),
        });
    }
    let mut d = Vec::with_capacity(rows.len() * (rows.len() - 1) / 2);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            d.push(sq_dist(rows[i], rows[j]).sqrt());
        }
    }
    let mid = d.len() / 2;
    let (_, median, _) = d.select_nth_unstable_by(mid, f64::total_cmp);
    if *median > 0.0 {
        return Ok(*median);
    }
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    Ok(if mean > 0.0 { mean } else { 1.0 })
}

/// Linear statistic `(2/m2) Σ_i h(2i, 2i+1)` on the rows as given, with
/// `h(a, b) = k(x_a, x_b) + k(y_a, y_b) − k(x_a, y_b) − k(x_b, y_a)`.
/// Returns the statistic and the `m2/2` individual h-terms.
pub fn mmd_linear_statistic(x: &Sample, y: &Sample, sigma: f64) -> Result<(f64, Vec<f64>)> {
    check_pair(x, y)?;
    let m2 = 2 * (x.len() / 2);
    if m2 < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: x.len(),
        });
    }
    let h: Vec<f64> = (0..m2 / 2)
        .map(|i| {
            let (a, b) = (2 * i, 2 * i + 1);
            gaussian_kernel(x.row(a), x.row(b), sigma) + gaussian_kernel(y.row(a), y.row(b), sigma)
                - gaussian_kernel(x.row(a), y.row(b), sigma)
                - gaussian_kernel(x.row(b), y.row(a), sigma)
        })
        .collect();
    let stat = h.iter().sum::<f64>() / h.len() as f64;
    Ok((stat, h))
}

fn check_pair(x: &Sample, y: &Sample) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    if x.len() != y.len() {
        return Err(Error::UnequalSizes {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Linear-time MMD test with a one-sided Gaussian p-value.
///
/// Rows are first put through one seeded shuffle (the same permutation for
/// both samples), so the pairing of consecutive rows does not depend on the
/// input order; an odd final row is then dropped. The p-value is
/// `1 − Φ(stat / √(var(h)/(m2/2)))` with the unbiased variance of the
/// h-terms. With the median heuristic the bandwidth is computed on at most
/// [`MEDIAN_MAX_POINTS`] pooled rows, half from each shuffled sample.
pub fn mmd_linear_test(
    s_p: &Sample,
    s_q: &Sample,
    kernel: KernelConfig,
    alpha: f64,
    rng: &mut Rng,
) -> Result<TestOutcome> {
    check_pair(s_p, s_q)?;
    kernel.validate()?;
    let n = s_p.len();
    if n < 4 {
        return Err(Error::TooFew { needed: 4, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.truncate(2 * (n / 2));
    let x = s_p.select(&order);
    let y = s_q.select(&order);

    let sigma = match kernel {
        KernelConfig::Bandwidth(s) => s,
        KernelConfig::MedianHeuristic => {
            let half = (MEDIAN_MAX_POINTS / 2).min(x.len());
            let rows: Vec<&[f64]> = (0..half).map(|i| x.row(i)).chain((0..half).map(|i| y.row(i))).collect();
            median_distance(&rows)?
        }
    };
    let (stat, h) = mmd_linear_statistic(&x, &y, sigma)?;
    let count = h.len() as f64;
    let var = h.iter().map(|v| (v - stat) * (v - stat)).sum::<f64>() / (count - 1.0);
    let p = if var > 0.0 {
        normal_sf(stat / (var / count).sqrt())
    } else if stat <= 0.0 {
        1.0
    } else {
        return Err(Error::Degenerate("linear MMD h-terms have zero variance"));
    };
    Ok(TestOutcome::new(TestKind::Mmd, stat, p, alpha)
        .with_detail("n", x.len() as f64)
        .with_detail("bandwidth", sigma)
        .with_detail("h_variance", var))
}

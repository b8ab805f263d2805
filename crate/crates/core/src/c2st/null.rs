//! Null and alternative laws of the accuracy statistic, p-values and power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{binomial_upper_tail, normal_cdf, normal_quantile, normal_sf, GaussianApprox};

/// Which null law turns the accuracy into a p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullApprox {
    /// `N(1/2, 1/(4 n_te))`.
    #[default]
    Gaussian,
    /// Exact `Binomial(n_te, 1/2)` tail; limited to `n_te ≤ 10^4`.
    ExactBinomial,
}

pub const EXACT_MAX_N: usize = 10_000;

/// Gaussian approximation of the null law of the accuracy.
pub fn null_approx(n_te: usize) -> Result<GaussianApprox> {
    if n_te == 0 {
        return Err(Error::TooFew { needed: 1, got: 0 });
    }
    GaussianApprox::new(0.5, 0.25 / n_te as f64)
}

/// One-sided p-value `1 − Φ((t̂ − 1/2) √(4 n_te))`.
pub fn pvalue(accuracy: f64, n_te: usize) -> f64 {
    normal_sf((accuracy - 0.5) * (4.0 * n_te as f64).sqrt())
}

/// Two-sided Gaussian p-value, for accuracies far *below* chance as well.
pub fn pvalue_two_sided(accuracy: f64, n_te: usize) -> f64 {
    let z = (accuracy - 0.5).abs() * (4.0 * n_te as f64).sqrt();
    (2.0 * normal_sf(z)).min(1.0)
}

/// Exact one-sided p-value `P(X ≥ correct)` with `X ~ Binomial(n_te, 1/2)`.
pub fn pvalue_exact(correct: usize, n_te: usize) -> Result<f64> {
    if n_te == 0 || n_te > EXACT_MAX_N {
        return Err(Error::Config(format!(
            "exact binomial null supports 1 <= n_te <= {EXACT_MAX_N}, got {n_te}"
        )));
    }
    if correct > n_te {
        return Err(Error::Config(format!("{correct} correct out of {n_te}")));
    }
    binomial_upper_tail(correct as u64, n_te as u64, 0.5)
}

/// Exact two-sided p-value (doubled smaller tail).
pub fn pvalue_exact_two_sided(correct: usize, n_te: usize) -> Result<f64> {
    let upper = pvalue_exact(correct, n_te)?;
    // by symmetry of Binomial(n, 1/2): P(X ≤ c) = P(X ≥ n − c)
    let lower = pvalue_exact(n_te - correct, n_te)?;
    Ok((2.0 * upper.min(lower)).min(1.0))
}

/// Gaussian approximation `N(p̄, p̄(1 − p̄)/n_te)` of the accuracy under the
/// alternative, where `p̄` is the mean per-example probability of being
/// classified correctly.
pub fn alternative_approx(mean_accuracy: f64, n_te: usize) -> Result<GaussianApprox> {
    if !(mean_accuracy > 0.0 && mean_accuracy < 1.0) {
        return Err(Error::Domain {
            what: "mean accuracy",
            value: mean_accuracy,
            expected: "0 < p < 1",
        });
    }
    if n_te == 0 {
        return Err(Error::TooFew { needed: 1, got: 0 });
    }
    GaussianApprox::new(mean_accuracy, mean_accuracy * (1.0 - mean_accuracy) / n_te as f64)
}

/// Inputs of the closed-form power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerQuery {
    alpha: f64,
    n_te: usize,
    epsilon: f64,
}

impl PowerQuery {
    pub fn new(alpha: f64, n_te: usize, epsilon: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "significance level",
                value: alpha,
                expected: "0 < alpha < 1",
            });
        }
        if n_te == 0 {
            return Err(Error::TooFew { needed: 1, got: 0 });
        }
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::Domain {
                what: "effect size",
                value: epsilon,
                expected: "0 < epsilon < 1/2",
            });
        }
        Ok(Self { alpha, n_te, epsilon })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_te(&self) -> usize {
        self.n_te
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Accuracy above which the one-sided Gaussian test rejects.
    pub fn threshold(&self) -> f64 {
        0.5 + self.upper_quantile() / (4.0 * self.n_te as f64).sqrt()
    }

    fn upper_quantile(&self) -> f64 {
        // alpha is validated to lie in (0, 1)
        normal_quantile(1.0 - self.alpha).expect("alpha in (0, 1)")
    }
}

/// Approximate power of the accuracy test when the classifier's expected
/// accuracy is `1/2 + ε`:
///
/// `Φ((ε √n_te − Φ⁻¹(1 − α)/2) / √(1/4 − ε²))`.
///
/// The rejection threshold is taken under the null variance `1/(4 n_te)` and
/// the acceptance probability under the alternative variance `(1/4 − ε²)/n_te`.
pub fn power(q: &PowerQuery) -> f64 {
    let eps = q.epsilon;
    let num = eps * (q.n_te as f64).sqrt() - q.upper_quantile() / 2.0;
    normal_cdf(num / (0.25 - eps * eps).sqrt())
}

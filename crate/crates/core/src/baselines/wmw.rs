//! Wilcoxon–Mann–Whitney rank-sum test.

use super::pooled::Pooled;
use super::univariate;
use crate::error::{Error, Result};
use crate::numerics::normal_sf;
use crate::outcome::{TestKind, TestOutcome};
use crate::sample::Sample;

/// Two-sided WMW test. The statistic is `U_P`, the number of pairs with the
/// first-sample value larger, counting ties as one half (midranks).
///
/// The p-value is exact (full permutation null) when the pooled data admits
/// at most [`super::EXACT_SPLITS_MAX`] splits, and otherwise comes from the
/// normal approximation with variance
/// `nm/12 · ((N + 1) − Σ(t³ − t) / (N(N − 1)))`.
pub fn wmw_test(s_p: &Sample, s_q: &Sample, alpha: f64) -> Result<TestOutcome> {
    let (x, y) = univariate(TestKind::Wmw, s_p, s_q, 2)?;
    let pooled = Pooled::new(x, y);
    if pooled.groups() < 2 {
        return Err(Error::Degenerate("all pooled values are identical"));
    }
    let (n, m) = (x.len() as f64, y.len() as f64);
    let total = n + m;
    let u_p = pooled.observed().u_first;
    let mean = n * m / 2.0;
    let var = n * m / 12.0 * ((total + 1.0) - pooled.tie_term() / (total * (total - 1.0)));
    let z = (u_p - mean) / var.sqrt();
    let exact = pooled.exact_feasible();
    let p = if exact {
        pooled.permutation_pvalue(|s| (s.u_first - mean).abs())
    } else {
        (2.0 * normal_sf(z.abs())).min(1.0)
    };
    Ok(TestOutcome::new(TestKind::Wmw, u_p, p, alpha)
        .with_detail("n", n)
        .with_detail("m", m)
        .with_detail("u_q", n * m - u_p)
        .with_detail("z", z)
        .with_detail("exact_null", f64::from(u8::from(exact))))
}

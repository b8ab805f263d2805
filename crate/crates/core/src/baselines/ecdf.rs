//! Kolmogorov–Smirnov and Kuiper tests on empirical distribution functions.

use super::pooled::Pooled;
use super::univariate;
use crate::error::Result;
use crate::outcome::{TestKind, TestOutcome};
use crate::sample::Sample;

const SERIES_EPS: f64 = 1e-12;

/// Asymptotic Kolmogorov tail `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
///
/// For small `λ` the alternating series converges slowly; there the
/// equivalent theta-function form
/// `1 − √(2π)/λ Σ_{k≥1} e^{−(2k−1)²π²/(8λ²)}` is summed instead.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let a = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1.. {
            let j = (2 * k - 1) as f64;
            let term = (a * j * j).exp();
            sum += term;
            if term < SERIES_EPS {
                break;
            }
        }
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * sum;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1.. {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < SERIES_EPS {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic Kuiper tail `Q(λ) = 2 Σ_{k≥1} (4k²λ² − 1) e^{−2k²λ²}`.
///
/// The series is numerically 1 below `λ = 0.4`.
pub fn kuiper_sf(lambda: f64) -> f64 {
    if lambda < 0.4 {
        return 1.0;
    }
    let l2 = lambda * lambda;
    let mut sum = 0.0;
    for k in 1.. {
        let k2 = (k * k) as f64;
        let term = (4.0 * k2 * l2 - 1.0) * (-2.0 * k2 * l2).exp();
        sum += term;
        // the k = 1 term vanishes at λ = 1/2
        if k > 1 && term.abs() < SERIES_EPS {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `nm / (n + m)`.
fn effective_size(n: usize, m: usize) -> f64 {
    (n * m) as f64 / (n + m) as f64
}

/// Two-sample Kolmogorov–Smirnov test, `D = sup |F_P − F_Q|`.
///
/// Small problems (at most [`super::EXACT_SPLITS_MAX`] splits of the pooled
/// data) use the exact permutation null; larger ones the asymptotic tail at
/// `λ = (√ne + 0.12 + 0.11/√ne) D` with `ne = nm/(n+m)`.
pub fn ks_test(s_p: &Sample, s_q: &Sample, alpha: f64) -> Result<TestOutcome> {
    let (x, y) = univariate(TestKind::Ks, s_p, s_q, 1)?;
    let pooled = Pooled::new(x, y);
    let obs = pooled.observed();
    let d = obs.d_plus.max(obs.d_minus);
    let exact = pooled.exact_feasible();
    let p = if exact {
        pooled.permutation_pvalue(|s| s.d_plus.max(s.d_minus))
    } else {
        let ne = effective_size(x.len(), y.len()).sqrt();
        kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)
    };
    Ok(TestOutcome::new(TestKind::Ks, d, p, alpha)
        .with_detail("n", x.len() as f64)
        .with_detail("m", y.len() as f64)
        .with_detail("d_plus", obs.d_plus)
        .with_detail("d_minus", obs.d_minus)
        .with_detail("exact_null", f64::from(u8::from(exact))))
}

/// Two-sample Kuiper test, `V = D⁺ + D⁻`.
///
/// Same null policy as [`ks_test`], with
/// `λ = (√ne + 0.155 + 0.24/√ne) V` in the asymptotic regime.
pub fn kuiper_test(s_p: &Sample, s_q: &Sample, alpha: f64) -> Result<TestOutcome> {
    let (x, y) = univariate(TestKind::Kuiper, s_p, s_q, 1)?;
    let pooled = Pooled::new(x, y);
    let obs = pooled.observed();
    let v = obs.d_plus + obs.d_minus;
    let exact = pooled.exact_feasible();
    let p = if exact {
        pooled.permutation_pvalue(|s| s.d_plus + s.d_minus)
    } else {
        let ne = effective_size(x.len(), y.len()).sqrt();
        kuiper_sf((ne + 0.155 + 0.24 / ne) * v)
    };
    Ok(TestOutcome::new(TestKind::Kuiper, v, p, alpha)
        .with_detail("n", x.len() as f64)
        .with_detail("m", y.len() as f64)
        .with_detail("d_plus", obs.d_plus)
        .with_detail("d_minus", obs.d_minus)
        .with_detail("exact_null", f64::from(u8::from(exact))))
}

/// One-sample KS distance `sup |F_n − F|` against a continuous CDF, and its
/// asymptotic p-value.
pub fn ks_one_sample(values: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 1.0);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let d = v
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sn = n.sqrt();
    (d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> Sample {
        Sample::from_column(v.to_vec()).unwrap()
    }

    #[test]
    fn kolmogorov_tail_reference_values() {
        // reference values of the Kolmogorov distribution
        assert!((kolmogorov_sf(1.0) - 0.269_999_671_677_355_4).abs() < 1e-10);
        assert!((kolmogorov_sf(0.5) - 0.963_945_243_664_307_9).abs() < 1e-10);
        assert!((kolmogorov_sf(1.358_098_639_322_550_7) - 0.05).abs() < 1e-8);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        // both branches agree at the switch point
        let below = kolmogorov_sf(1.18 - 1e-12);
        let above = kolmogorov_sf(1.18);
        assert!((below - above).abs() < 1e-10);
    }

    #[test]
    fn kuiper_tail_is_decreasing() {
        let mut last = 1.0;
        for i in 1..40 {
            let q = kuiper_sf(0.1 * i as f64);
            assert!(q <= last + 1e-12);
            last = q;
        }
        assert!((kuiper_sf(0.4) - 1.0).abs() < 1e-4);
        // Kuiper 5% point is about 1.747
        assert!((kuiper_sf(1.747) - 0.05).abs() < 1e-3);
    }

    #[test]
    fn hand_computed_cases() {
        let ks = ks_test(&col(&[1.0, 2.0, 3.0]), &col(&[4.0, 5.0, 6.0]), 0.05).unwrap();
        assert_eq!(ks.statistic, 1.0);
        // exact: only 2 of the 20 splits separate completely
        assert!((ks.p_value - 0.1).abs() < 1e-12);

        let a = col(&[1.0, 2.0, 3.0, 4.0]);
        let b = col(&[2.0, 3.0, 4.0, 5.0]);
        assert_eq!(ks_test(&a, &b, 0.05).unwrap().statistic, 0.25);
        // F_P − F_Q over the pooled grid: .25, .25, .25, .25, 0; never negative
        let kp = kuiper_test(&a, &b, 0.05).unwrap();
        assert_eq!(kp.statistic, 0.25);
        assert_eq!(kp.detail("d_plus"), Some(0.25));
        assert_eq!(kp.detail("d_minus"), Some(0.0));
        // interleaving gives both signs
        let kp = kuiper_test(&col(&[1.0, 4.0]), &col(&[2.0, 3.0]), 0.05).unwrap();
        assert_eq!(kp.statistic, 1.0);

        let same = ks_test(&a, &a, 0.05).unwrap();
        assert_eq!((same.statistic, same.p_value), (0.0, 1.0));
        assert_eq!(kuiper_test(&a, &a, 0.05).unwrap().statistic, 0.0);
    }

    #[test]
    fn asymptotic_regime_for_large_samples() {
        let x: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..200).map(|i| i as f64 + 20.5).collect();
        let out = ks_test(&col(&x), &col(&y), 0.05).unwrap();
        assert_eq!(out.detail("exact_null"), Some(0.0));
        assert!((out.statistic - 0.105).abs() < 1e-12);
        let ne: f64 = 10.0;
        let expected = kolmogorov_sf((ne + 0.12 + 0.011) * 0.105);
        assert!((out.p_value - expected).abs() < 1e-14);
    }

    #[test]
    fn one_sample_against_uniform() {
        let v = [0.1, 0.4, 0.7];
        let (d, _) = ks_one_sample(&v, |x| x.clamp(0.0, 1.0));
        // gaps: 0.1, 1/3-0.1, 0.4-1/3, 2/3-0.4, 0.7-2/3, 1-0.7
        assert!((d - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rejects_multivariate() {
        let two = Sample::new(3, 2, vec![0.0; 6]).unwrap();
        assert!(ks_test(&two, &two, 0.05).is_err());
        assert!(kuiper_test(&col(&[1.0]), &two, 0.05).is_err());
    }
}

//! Classical and kernel two-sample tests used as baselines.

mod ecdf;
mod mmd;
mod pooled;
mod wmw;

pub use ecdf::{kolmogorov_sf, ks_one_sample, ks_test, kuiper_sf, kuiper_test};
pub use mmd::{
    gaussian_kernel, median_distance, mmd_linear_statistic, mmd_linear_test, KernelConfig, MEDIAN_MAX_POINTS,
};
pub use pooled::EXACT_SPLITS_MAX;
pub use wmw::wmw_test;

use crate::error::{Error, Result};
use crate::outcome::TestKind;
use crate::sample::Sample;

/// Both samples as plain value slices, after checking dimension and sizes.
fn univariate<'a>(test: TestKind, s_p: &'a Sample, s_q: &'a Sample, min_size: usize) -> Result<(&'a [f64], &'a [f64])> {
    for s in [s_p, s_q] {
        if s.dim() != 1 {
            return Err(Error::NotUnivariate {
                test: test.name(),
                dim: s.dim(),
            });
        }
        if s.len() < min_size {
            return Err(Error::TooFew {
                needed: min_size,
                got: s.len(),
            });
        }
    }
    Ok((s_p.as_slice(), s_q.as_slice()))
}

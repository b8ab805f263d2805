//! Special functions, seedable random streams and the samplers used by the
//! experiments.

mod rng;
mod sampling;
mod special;

pub use rng::{mix_seed, Rng};
pub use sampling::{sample_normal, sample_sinusoid, sample_student_t, standardize, standardize_in_place};
pub use special::{binomial_upper_tail, erf, erfc, normal_cdf, normal_quantile, normal_sf, GaussianApprox};

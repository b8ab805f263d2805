//! Classifier two-sample tests.
//!
//! Train a binary classifier to tell two samples apart and read its held-out
//! accuracy as a test statistic: chance-level accuracy is consistent with
//! both samples coming from the same distribution, accuracy above chance is
//! evidence against it. Under the null the number of correct test
//! predictions is `Binomial(n_te, 1/2)`, which gives p-values and a
//! closed-form power approximation.
//!
//! Alongside the classifier tests the crate ships the classical baselines
//! (Kolmogorov–Smirnov, Kuiper, Wilcoxon–Mann–Whitney, linear-time MMD), a
//! seeded experiment harness, and bivariate cause-effect discovery with
//! conditional GANs scored by a classifier test.

pub mod baselines;
pub mod c2st;
pub mod causal;
pub mod classifiers;
pub mod datafile;
pub mod error;
pub mod experiments;
pub mod nn;
pub mod numerics;
pub mod outcome;
pub mod sample;
pub mod two_sample;

pub use error::{Error, Result};
pub use outcome::{TestKind, TestOutcome};
pub use sample::Sample;
pub use two_sample::{run_test, TestOptions};

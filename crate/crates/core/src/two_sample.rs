//! One entry point for every test, returning the shared [`TestOutcome`].

use serde::{Deserialize, Serialize};

use crate::baselines::{ks_test, kuiper_test, mmd_linear_test, wmw_test, KernelConfig};
use crate::c2st::{self, C2stConfig, NullApprox};
use crate::classifiers::MlpHyperparams;
use crate::error::Result;
use crate::numerics::Rng;
use crate::outcome::{TestKind, TestOutcome};
use crate::sample::Sample;

/// Settings that only some tests read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOptions {
    pub train_fraction: f64,
    #[serde(default)]
    pub two_sided: bool,
    #[serde(default)]
    pub null: NullApprox,
    #[serde(default)]
    pub mlp: MlpHyperparams,
    #[serde(default)]
    pub knn_k: Option<usize>,
    #[serde(default)]
    pub kernel: KernelConfig,
}

impl Default for TestOptions {
    fn default() -> Self {
        Self {
            train_fraction: 0.5,
            two_sided: false,
            null: NullApprox::Gaussian,
            mlp: MlpHyperparams::default(),
            knn_k: None,
            kernel: KernelConfig::MedianHeuristic,
        }
    }
}

impl TestOptions {
    /// Classifier-test configuration for `kind` with the given level and seed.
    pub fn c2st_config(&self, kind: c2st::ClassifierKind, alpha: f64, seed: u64) -> C2stConfig {
        C2stConfig {
            classifier: kind,
            train_fraction: self.train_fraction,
            alpha,
            seed,
            two_sided: self.two_sided,
            null: self.null,
            mlp: self.mlp,
            knn_k: self.knn_k,
        }
    }
}

/// Runs `kind` on the two samples. `seed` drives every random choice of the
/// test (split and training for the classifier tests, the pairing shuffle
/// for MMD); the rank and CDF tests are deterministic and ignore it.
pub fn run_test(
    kind: TestKind,
    s_p: &Sample,
    s_q: &Sample,
    alpha: f64,
    seed: u64,
    opts: &TestOptions,
) -> Result<TestOutcome> {
    match kind {
        TestKind::C2stNn | TestKind::C2stKnn => {
            let classifier = kind.classifier().expect("classifier test");
            let out = c2st::run(s_p, s_q, &opts.c2st_config(classifier, alpha, seed))?;
            Ok(TestOutcome::from(&out))
        }
        TestKind::Mmd => mmd_linear_test(s_p, s_q, opts.kernel, alpha, &mut Rng::new(seed)),
        TestKind::Ks => ks_test(s_p, s_q, alpha),
        TestKind::Kuiper => kuiper_test(s_p, s_q, alpha),
        TestKind::Wmw => wmw_test(s_p, s_q, alpha),
    }
}

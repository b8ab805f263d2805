//! Uniform result record shared by every two-sample test.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::c2st::{C2stOutcome, ClassifierKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TestKind {
    #[serde(rename = "c2st-nn")]
    C2stNn,
    #[serde(rename = "c2st-knn")]
    C2stKnn,
    #[serde(rename = "mmd")]
    Mmd,
    #[serde(rename = "ks")]
    Ks,
    #[serde(rename = "kuiper")]
    Kuiper,
    #[serde(rename = "wmw")]
    Wmw,
}

impl TestKind {
    pub const ALL: [TestKind; 6] = [
        TestKind::C2stNn,
        TestKind::C2stKnn,
        TestKind::Mmd,
        TestKind::Ks,
        TestKind::Kuiper,
        TestKind::Wmw,
    ];

    /// Tests that accept samples of any dimension.
    pub const MULTIVARIATE: [TestKind; 3] = [TestKind::C2stNn, TestKind::C2stKnn, TestKind::Mmd];

    pub fn name(&self) -> &'static str {
        match self {
            TestKind::C2stNn => "c2st-nn",
            TestKind::C2stKnn => "c2st-knn",
            TestKind::Mmd => "mmd",
            TestKind::Ks => "ks",
            TestKind::Kuiper => "kuiper",
            TestKind::Wmw => "wmw",
        }
    }

    pub fn univariate_only(&self) -> bool {
        matches!(self, TestKind::Ks | TestKind::Kuiper | TestKind::Wmw)
    }

    pub fn classifier(&self) -> Option<ClassifierKind> {
        match self {
            TestKind::C2stNn => Some(ClassifierKind::Nn),
            TestKind::C2stKnn => Some(ClassifierKind::Knn),
            _ => None,
        }
    }

    /// Stable small integer, used to derive per-test random streams.
    pub fn stream_id(&self) -> u64 {
        match self {
            TestKind::C2stNn => 1,
            TestKind::C2stKnn => 2,
            TestKind::Mmd => 3,
            TestKind::Ks => 4,
            TestKind::Kuiper => 5,
            TestKind::Wmw => 6,
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TestKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown test '{s}' (expected one of c2st-nn, c2st-knn, mmd, ks, kuiper, wmw)"))
    }
}

/// Statistic, p-value and decision of one test run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub test: TestKind,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    /// `p_value < alpha`.
    pub reject: bool,
    /// Test-specific diagnostics (sample sizes, one-sided parts, bandwidth, ...).
    #[serde(default)]
    pub details: BTreeMap<String, f64>,
}

impl TestOutcome {
    pub fn new(test: TestKind, statistic: f64, p_value: f64, alpha: f64) -> Self {
        Self {
            test,
            statistic,
            p_value,
            alpha,
            reject: p_value < alpha,
            details: BTreeMap::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.get(key).copied()
    }
}

impl From<&C2stOutcome> for TestOutcome {
    fn from(o: &C2stOutcome) -> Self {
        let test = match o.classifier {
            ClassifierKind::Nn => TestKind::C2stNn,
            ClassifierKind::Knn => TestKind::C2stKnn,
        };
        TestOutcome {
            test,
            statistic: o.statistic,
            p_value: o.p_value,
            alpha: o.alpha,
            reject: o.reject,
            details: BTreeMap::new(),
        }
        .with_detail("n_te", o.n_te as f64)
        .with_detail("correct", o.correct as f64)
    }
}

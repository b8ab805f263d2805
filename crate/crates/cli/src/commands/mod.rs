pub mod bench;
pub mod causal;
pub mod interpret;
pub mod power;

use c2st::baselines::KernelConfig;
use c2st::c2st::NullApprox;
use c2st::TestOptions;

use crate::args::{ClassifierArgs, Global};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

impl Global {
    pub fn format(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else if self.table {
            Format::Table
        } else {
            default
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(rand::random)
    }

    pub fn alpha(&self) -> CliResult<f64> {
        let alpha = self.alpha.unwrap_or(0.05);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(alpha)
    }

    pub fn split(&self) -> CliResult<f64> {
        let split = self.split.unwrap_or(0.5);
        if !(split > 0.0 && split < 1.0) {
            return Err(CliError::Usage(format!("--split must lie in (0, 1), got {split}")));
        }
        Ok(split)
    }

    /// Rejects configuration flags next to `--replay`, which would be ignored.
    pub fn check_replay(&self, extra: &[(&str, bool)]) -> CliResult<()> {
        let given: Vec<&str> = [
            ("--seed", self.seed.is_some()),
            ("--alpha", self.alpha.is_some()),
            ("--split", self.split.is_some()),
        ]
        .iter()
        .chain(extra)
        .filter(|(_, set)| *set)
        .map(|(name, _)| *name)
        .collect();
        if given.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "--replay takes the whole configuration from the envelope; drop {}",
                given.join(", ")
            )))
        }
    }
}

impl ClassifierArgs {
    pub fn is_set(&self) -> bool {
        self.hidden.is_some()
            || self.epochs.is_some()
            || self.batch_size.is_some()
            || self.learning_rate.is_some()
            || self.k.is_some()
            || self.two_sided
            || self.exact_null
            || self.bandwidth.is_some()
    }

    pub fn options(&self, split: f64) -> CliResult<TestOptions> {
        let mut o = TestOptions {
            train_fraction: split,
            two_sided: self.two_sided,
            ..TestOptions::default()
        };
        if self.exact_null {
            o.null = NullApprox::ExactBinomial;
        }
        if let Some(h) = self.hidden {
            o.mlp.hidden = h;
        }
        if let Some(e) = self.epochs {
            o.mlp.epochs = e;
        }
        if let Some(b) = self.batch_size {
            o.mlp.batch_size = b;
        }
        if let Some(lr) = self.learning_rate {
            if !(lr > 0.0 && lr.is_finite()) {
                return Err(CliError::Usage(format!("--learning-rate must be positive, got {lr}")));
            }
            o.mlp.adam.learning_rate = lr;
        }
        if o.mlp.hidden == 0 || o.mlp.batch_size == 0 {
            return Err(CliError::Usage("--hidden and --batch-size must be positive".into()));
        }
        if let Some(k) = self.k {
            if k == 0 {
                return Err(CliError::Usage("--k must be positive".into()));
            }
            o.knn_k = Some(k);
        }
        if let Some(b) = self.bandwidth {
            if !(b > 0.0 && b.is_finite()) {
                return Err(CliError::Usage(format!("--bandwidth must be positive, got {b}")));
            }
            o.kernel = KernelConfig::Bandwidth(b);
        }
        Ok(o)
    }
}

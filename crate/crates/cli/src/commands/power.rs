use std::time::Instant;

use c2st::c2st::{power, PowerQuery};
use serde::{Deserialize, Serialize};

use super::Format;
use crate::args::{Global, PowerArgs};
use crate::envelope::{replay_config, Envelope};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    pub alpha: f64,
    pub n_te: usize,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub power: f64,
}

pub fn run(args: &PowerArgs, global: &Global) -> CliResult<()> {
    let start = Instant::now();
    let cfg: PowerConfig = match &args.replay {
        Some(path) => {
            global.check_replay(&[("--n-te", args.n_te.is_some()), ("--epsilon", args.epsilon.is_some())])?;
            replay_config(path, "power")?
        }
        None => PowerConfig {
            alpha: global.alpha()?,
            n_te: args.n_te.ok_or_else(|| CliError::Usage("--n-te is required".into()))?,
            epsilon: args
                .epsilon
                .ok_or_else(|| CliError::Usage("--epsilon is required".into()))?,
        },
    };
    let query = PowerQuery::new(cfg.alpha, cfg.n_te, cfg.epsilon)?;
    let report = PowerReport { power: power(&query) };
    match global.format(Format::Table) {
        Format::Json => Envelope::new("power", cfg, report, start.elapsed()).print(),
        Format::Table => println!("{:.6}", report.power),
    }
    Ok(())
}

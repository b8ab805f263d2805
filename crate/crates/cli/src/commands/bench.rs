use std::path::PathBuf;
use std::time::Instant;

use c2st::experiments::{run_grid, TableRow, TrialGrid};
use serde::{Deserialize, Serialize};

use super::Format;
use crate::args::{BenchArgs, Global};
use crate::envelope::{replay_config, Envelope};
use crate::error::{CliError, CliResult};
use crate::files::{write_atomic, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub grid: TrialGrid,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub files: Vec<PathBuf>,
    pub rows: Vec<TableRow>,
}

fn set<T: Clone>(dst: &mut Vec<T>, src: &[T]) {
    if !src.is_empty() {
        *dst = src.to_vec();
    }
}

fn resolve(args: &BenchArgs, global: &Global) -> CliResult<BenchConfig> {
    if let Some(path) = &args.replay {
        global.check_replay(&[
            ("--experiment", args.experiment.is_some()),
            (
                "grid lists",
                !(args.n.is_empty() && args.nu.is_empty() && args.delta.is_empty() && args.gamma.is_empty()),
            ),
            ("--trials", args.trials.is_some()),
            ("--tests", !args.tests.is_empty()),
            ("classifier flags", args.classifier.is_set()),
        ])?;
        return replay_config(path, "bench");
    }
    let experiment = args
        .experiment
        .ok_or_else(|| CliError::Usage("--experiment is required".into()))?;
    let mut grid = TrialGrid::defaults(experiment, global.seed());
    set(&mut grid.n, &args.n);
    set(&mut grid.nu, &args.nu);
    set(&mut grid.delta, &args.delta);
    set(&mut grid.gamma, &args.gamma);
    set(&mut grid.tests, &args.tests);
    if let Some(t) = args.trials {
        grid.trials = t;
    }
    grid.alpha = global.alpha()?;
    grid.options = args.classifier.options(global.split()?)?;
    grid.validate()?;
    Ok(BenchConfig {
        grid,
        out: args.out.clone(),
    })
}

pub fn run(args: &BenchArgs, global: &Global) -> CliResult<()> {
    let start = Instant::now();
    let cfg = resolve(args, global)?;
    let table = run_grid(&cfg.grid)?;
    let stem = cfg.grid.experiment.name();
    let tsv = cfg.out.join(format!("{stem}.tsv"));
    let json = cfg.out.join(format!("{stem}.json"));
    write_atomic(&tsv, table.to_tsv().as_bytes())?;
    write_json(&json, &table)?;
    match global.format(Format::Json) {
        Format::Json => {
            let report = BenchReport {
                files: vec![tsv, json],
                rows: table.rows,
            };
            Envelope::new("bench", cfg, report, start.elapsed()).print();
        }
        Format::Table => print!("{}", table.to_tsv()),
    }
    Ok(())
}

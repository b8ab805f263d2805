use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use c2st::causal::{cause_effect, CausalConfig, CausalVerdict, Direction};
use c2st::numerics::Rng;
use serde::{Deserialize, Serialize};

use super::Format;
use crate::args::{CausalArgs, Global};
use crate::envelope::{replay_config, Envelope};
use crate::error::{CliError, CliResult};
use crate::files::read_table;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalRunConfig {
    pub path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<PathBuf>,
    /// `causal.seed` is the base seed; pair `i` (in name order) uses child `i`.
    pub causal: CausalConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub file: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<CausalVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correct: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pairs: usize,
    pub decided: usize,
    pub failed: usize,
    /// Decided pairs with a known direction.
    pub scored: usize,
    pub correct: usize,
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalReport {
    pub pairs: Vec<PairRecord>,
    pub summary: Summary,
}

/// Parses ground truth: `<name> <direction>` lines, or the six-column
/// Tübingen `pairmeta.txt` layout (`id cause_first cause_last effect_first
/// effect_last weight`), whose ids map to `pair<id>`. Multivariate pairmeta
/// rows are skipped.
pub fn parse_truth(text: &str) -> Result<BTreeMap<String, Direction>, String> {
    let mut truth = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        match f.as_slice() {
            [name, dir] => {
                let d = dir.parse().map_err(|e| format!("line {}: {e}", i + 1))?;
                truth.insert(name.to_string(), d);
            }
            [id, c0, c1, e0, e1, _weight] => {
                let cols = (
                    c0.parse::<u32>(),
                    c1.parse::<u32>(),
                    e0.parse::<u32>(),
                    e1.parse::<u32>(),
                );
                let (Ok(c0), Ok(c1), Ok(e0), Ok(e1)) = cols else {
                    return Err(format!("line {}: expected integer column ranges", i + 1));
                };
                let d = match (c0, c1, e0, e1) {
                    (1, 1, 2, 2) => Direction::XToY,
                    (2, 2, 1, 1) => Direction::YToX,
                    _ => continue,
                };
                truth.insert(format!("pair{id}"), d);
            }
            _ => return Err(format!("line {}: expected '<file> <direction>'", i + 1)),
        }
    }
    Ok(truth)
}

fn lookup(truth: &BTreeMap<String, Direction>, file: &Path) -> Option<Direction> {
    let name = file.file_name()?.to_str()?;
    let stem = file.file_stem()?.to_str()?;
    truth.get(name).or_else(|| truth.get(stem)).copied()
}

/// Pair files of a directory in name order; hidden files, descriptions and
/// the truth file are skipped.
fn list_pairs(dir: &Path, truth: Option<&Path>) -> CliResult<Vec<PathBuf>> {
    let skip = truth.and_then(|t| fs::canonicalize(t).ok());
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| CliError::file(dir, e))? {
        let path = entry.map_err(|e| CliError::file(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        let lower = name.to_ascii_lowercase();
        if !path.is_file()
            || name.starts_with('.')
            || lower.ends_with("_des.txt")
            || lower.starts_with("readme")
            || lower.starts_with("pairmeta")
            || lower.ends_with(".json")
            || (skip.is_some() && fs::canonicalize(&path).ok() == skip)
        {
            continue;
        }
        files.push(path);
    }
    files.sort();
    Ok(files)
}

fn decide(path: &Path, cfg: &CausalConfig) -> CliResult<CausalVerdict> {
    let table = read_table(path)?;
    if table.sample.dim() != 2 {
        return Err(CliError::Data(c2st::Error::DimensionMismatch {
            expected: 2,
            got: table.sample.dim(),
        }));
    }
    Ok(cause_effect(&table.sample, cfg)?)
}

fn resolve(args: &CausalArgs, global: &Global) -> CliResult<CausalRunConfig> {
    if let Some(path) = &args.replay {
        global.check_replay(&[
            ("the pair path", args.path.is_some()),
            ("--truth", args.truth.is_some()),
            ("--ensemble", args.ensemble.is_some()),
            ("--iterations", args.iterations.is_some()),
            ("--hidden", args.hidden.is_some()),
            ("--batch-size", args.batch_size.is_some()),
            ("--scoring", args.scoring.is_some()),
        ])?;
        return replay_config(path, "causal");
    }
    let path = args
        .path
        .clone()
        .ok_or_else(|| CliError::Usage("a pair file or directory is required".into()))?;
    let mut causal = CausalConfig::new(global.seed());
    if let Some(e) = args.ensemble {
        causal.ensemble = e;
    }
    if let Some(i) = args.iterations {
        causal.cgan.iterations = i;
    }
    if let Some(h) = args.hidden {
        causal.cgan.hidden = h;
    }
    if let Some(b) = args.batch_size {
        causal.cgan.batch_size = b;
    }
    if let Some(s) = args.scoring {
        causal.scoring = s;
    }
    if causal.cgan.hidden == 0 || causal.cgan.batch_size == 0 {
        return Err(CliError::Usage("--hidden and --batch-size must be positive".into()));
    }
    causal.scoring_options.train_fraction = global.split()?;
    causal.validate()?;
    Ok(CausalRunConfig {
        path,
        truth: args.truth.clone(),
        causal,
    })
}

pub fn execute(cfg: &CausalRunConfig) -> CliResult<CausalReport> {
    let truth = match &cfg.truth {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::file(p, e))?;
            parse_truth(&text).map_err(|e| CliError::file(p, e))?
        }
        None => BTreeMap::new(),
    };
    let single = cfg.path.is_file();
    let files = if single {
        vec![cfg.path.clone()]
    } else if cfg.path.is_dir() {
        list_pairs(&cfg.path, cfg.truth.as_deref())?
    } else {
        return Err(CliError::file(&cfg.path, "no such file or directory"));
    };

    let mut pairs = Vec::with_capacity(files.len());
    for (i, file) in files.iter().enumerate() {
        let mut member_cfg = cfg.causal.clone();
        member_cfg.seed = Rng::new(cfg.causal.seed).child(i as u64).seed();
        let result = match decide(file, &member_cfg) {
            Err(e) if single => return Err(e),
            r => r,
        };
        let known = lookup(&truth, file);
        let (verdict, error) = match result {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        pairs.push(PairRecord {
            file: file
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or_default()
                .to_string(),
            seed: member_cfg.seed,
            correct: known.zip(verdict.as_ref()).map(|(t, v)| t == v.direction),
            verdict,
            error,
            truth: known,
        });
    }
    let decided = pairs.iter().filter(|p| p.verdict.is_some()).count();
    let scored = pairs.iter().filter(|p| p.correct.is_some()).count();
    let correct = pairs.iter().filter(|p| p.correct == Some(true)).count();
    let summary = Summary {
        pairs: pairs.len(),
        decided,
        failed: pairs.len() - decided,
        scored,
        correct,
        accuracy: (scored > 0).then(|| correct as f64 / scored as f64),
    };
    Ok(CausalReport { pairs, summary })
}

pub fn run(args: &CausalArgs, global: &Global) -> CliResult<()> {
    let start = Instant::now();
    let cfg = resolve(args, global)?;
    let report = execute(&cfg)?;
    for p in &report.pairs {
        if let Some(e) = &p.error {
            eprintln!("c2st: {}: {e}", p.file);
        }
    }
    match global.format(Format::Json) {
        Format::Json => Envelope::new("causal", cfg, report, start.elapsed()).print(),
        Format::Table => {
            println!("file\tdirection\tt_xy\tt_yx\ttie\ttruth\tcorrect");
            let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            for p in &report.pairs {
                match &p.verdict {
                    Some(v) => println!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        p.file,
                        v.direction,
                        v.t_xy,
                        v.t_yx,
                        v.tie,
                        opt(p.truth.map(|d| d.to_string())),
                        opt(p.correct.map(|c| c.to_string()))
                    ),
                    None => println!("{}\terror\t-\t-\t-\t{}\t-", p.file, opt(p.truth.map(|d| d.to_string()))),
                }
            }
            let s = &report.summary;
            match s.accuracy {
                Some(a) => println!("# accuracy {}/{} = {a}", s.correct, s.scored),
                None => println!("# {} of {} pairs decided", s.decided, s.pairs),
            }
        }
    }
    Ok(())
}

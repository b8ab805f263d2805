use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use c2st::c2st::{interpret, InterpretReport, RankedExample};
use c2st::classifiers::LabeledDataset;
use serde::{Deserialize, Serialize};

use super::test::{fit_classifier, load_pair, read_saved_model, TestConfig};
use super::Format;
use crate::args::{Global, InterpretArgs};
use crate::envelope::{replay_config, Envelope};
use crate::error::{CliError, CliResult};
use crate::files::{write_atomic, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A directory written by `test --save-model`.
    Saved(PathBuf),
    /// Fit the classifier test here.
    Inline(TestConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpretConfig {
    pub source: Source,
    pub out: PathBuf,
    pub top: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpretSummary {
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    pub test_examples: usize,
    pub has_features: bool,
    pub files: Vec<PathBuf>,
}

fn resolve(args: &InterpretArgs, global: &Global) -> CliResult<InterpretConfig> {
    if let Some(path) = &args.replay {
        global.check_replay(&[
            ("--model", args.model.is_some()),
            ("--x/--y", args.x.is_some()),
            ("--out", args.out.is_some()),
            ("classifier flags", args.classifier.is_set()),
        ])?;
        return replay_config(path, "interpret");
    }
    let source = match (&args.model, &args.x, &args.y) {
        (Some(dir), _, _) => Source::Saved(dir.clone()),
        (None, Some(x), Some(y)) => Source::Inline(TestConfig {
            x: x.clone(),
            y: y.clone(),
            test: args.test,
            alpha: global.alpha()?,
            seed: global.seed(),
            options: args.classifier.options(global.split()?)?,
        }),
        _ => return Err(CliError::Usage("give --model DIR, or --x and --y".into())),
    };
    Ok(InterpretConfig {
        source,
        out: args
            .out
            .clone()
            .ok_or_else(|| CliError::Usage("--out is required".into()))?,
        top: args.top,
    })
}

fn tsv_row(out: &mut String, fields: impl IntoIterator<Item = String>) {
    let row: Vec<String> = fields.into_iter().collect();
    let _ = writeln!(out, "{}", row.join("\t"));
}

fn sample_name(label: u8) -> &'static str {
    if label == 0 {
        "x"
    } else {
        "y"
    }
}

fn ranked_tsv(report: &InterpretReport) -> String {
    let mut out = String::new();
    tsv_row(
        &mut out,
        ["rank", "index", "sample", "probability", "confidence", "correct"].map(String::from),
    );
    for (rank, r) in report.ranked.iter().enumerate() {
        tsv_row(
            &mut out,
            [
                (rank + 1).to_string(),
                r.index.to_string(),
                sample_name(r.label).to_string(),
                r.probability.to_string(),
                r.confidence.to_string(),
                r.correct.to_string(),
            ],
        );
    }
    out
}

/// Test examples with their feature values; `index` is the row in the
/// pooled data, `row` the row within its own file.
fn examples_tsv(rows: &[&RankedExample], data: &LabeledDataset, n_x: usize) -> String {
    let mut out = String::new();
    let mut head = vec!["index".to_string(), "sample".into(), "row".into(), "probability".into()];
    head.extend((1..=data.dim()).map(|j| format!("z{j}")));
    tsv_row(&mut out, head);
    for r in rows {
        let own = if r.label == 0 { r.index } else { r.index - n_x };
        let mut f = vec![
            r.index.to_string(),
            sample_name(r.label).into(),
            own.to_string(),
            r.probability.to_string(),
        ];
        f.extend(data.example(r.index).iter().map(|v| v.to_string()));
        tsv_row(&mut out, f);
    }
    out
}

fn matrix_tsv(names: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    let d = rows.first().map_or(0, Vec::len);
    let mut head = vec!["row".to_string()];
    head.extend((1..=d).map(|j| format!("w{j}")));
    tsv_row(&mut out, head);
    for (name, row) in names.iter().zip(rows) {
        let mut f = vec![name.clone()];
        f.extend(row.iter().map(|v| v.to_string()));
        tsv_row(&mut out, f);
    }
    out
}

pub fn execute(cfg: &InterpretConfig) -> CliResult<InterpretSummary> {
    let (test_cfg, outcome, classifier) = match &cfg.source {
        Source::Saved(dir) => {
            let saved = read_saved_model(dir)?;
            (saved.config, saved.outcome, saved.classifier)
        }
        Source::Inline(t) => {
            let (a, b) = load_pair(&t.x, &t.y)?;
            let (o, c) = fit_classifier(t, &a.sample, &b.sample)?;
            (t.clone(), o, c)
        }
    };
    let (a, b) = load_pair(&test_cfg.x, &test_cfg.y)?;
    let data = LabeledDataset::from_two_samples(&a.sample, &b.sample)?;
    let report = interpret(&outcome, &classifier, &data)?;

    let out = &cfg.out;
    let mut files = Vec::new();
    let mut put = |name: &str, text: String| -> CliResult<()> {
        let path = out.join(name);
        write_atomic(&path, text.as_bytes())?;
        files.push(path);
        Ok(())
    };
    put("ranked.tsv", ranked_tsv(&report))?;
    let n_x = a.sample.len();
    put(
        "confident_x.tsv",
        examples_tsv(&report.most_confident(0, cfg.top), &data, n_x),
    )?;
    put(
        "confident_y.tsv",
        examples_tsv(&report.most_confident(1, cfg.top), &data, n_x),
    )?;
    put(
        "least_confident.tsv",
        examples_tsv(&report.least_confident(cfg.top), &data, n_x),
    )?;
    if let Some(f) = &report.features {
        let units: Vec<String> = (0..f.first_layer.len()).map(|j| format!("unit{j}")).collect();
        put("first_layer.tsv", matrix_tsv(&units, &f.first_layer))?;
        let names = [
            format!("positive_unit{}", f.positive_unit),
            format!("negative_unit{}", f.negative_unit),
            "discriminative".to_string(),
        ];
        let rows = [
            f.positive_feature.clone(),
            f.negative_feature.clone(),
            f.discriminative_feature.clone(),
        ];
        put("features.tsv", matrix_tsv(&names, &rows))?;
    }
    let report_path = out.join("report.json");
    write_json(&report_path, &report)?;
    files.push(report_path);

    Ok(InterpretSummary {
        test: outcome.classifier.name().to_string(),
        statistic: outcome.statistic,
        p_value: outcome.p_value,
        test_examples: report.ranked.len(),
        has_features: report.features.is_some(),
        files,
    })
}

pub fn run(args: &InterpretArgs, global: &Global) -> CliResult<()> {
    let start = Instant::now();
    let cfg = resolve(args, global)?;
    if let Source::Inline(t) = &cfg.source {
        if t.test.classifier().is_none() {
            return Err(CliError::Usage(format!(
                "interpret needs a classifier test (c2st-nn or c2st-knn), not {}",
                t.test
            )));
        }
    }
    let summary = execute(&cfg)?;
    match global.format(Format::Json) {
        Format::Json => Envelope::new("interpret", cfg, summary, start.elapsed()).print(),
        Format::Table => {
            println!("test\t{}", summary.test);
            println!("statistic\t{}", summary.statistic);
            println!("p_value\t{}", summary.p_value);
            for f in &summary.files {
                println!("wrote\t{}", f.display());
            }
        }
    }
    Ok(())
}

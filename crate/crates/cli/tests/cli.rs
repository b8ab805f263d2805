use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use c2st::causal::synthetic_benchmark;
use c2st::numerics::{sample_normal, Rng};
use serde_json::Value;
use tempfile::TempDir;

fn c2st(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_c2st"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = c2st(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn schema() -> &'static jsonschema::Validator {
    static SCHEMA: OnceLock<jsonschema::Validator> = OnceLock::new();
    SCHEMA.get_or_init(|| {
        let text = include_str!("../schema/envelope.schema.json");
        jsonschema::validator_for(&serde_json::from_str(text).unwrap()).expect("schema compiles")
    })
}

fn schema_errors(v: &Value) -> Vec<String> {
    schema()
        .iter_errors(v)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect()
}

/// Runs a command expected to print an envelope, and checks it against the
/// published schema.
fn json(args: &[&str]) -> Value {
    let v: Value = serde_json::from_str(&ok(args)).expect("stdout is one JSON document");
    let errors = schema_errors(&v);
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    v
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes `rows` of whitespace-separated columns.
fn write_rows(path: &Path, rows: &[Vec<f64>]) {
    let text: String = rows
        .iter()
        .map(|r| r.iter().map(f64::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect();
    fs::write(path, text).unwrap();
}

fn gaussian_file(dir: &Path, name: &str, seed: u64, n: usize, d: usize, mean: f64) -> PathBuf {
    let v = sample_normal(&mut Rng::new(seed), n * d, mean, 1.0).unwrap().into_vec();
    let rows: Vec<Vec<f64>> = v.chunks(d).map(<[f64]>::to_vec).collect();
    let path = dir.join(name);
    write_rows(&path, &rows);
    path
}

fn table_field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn power_matches_reference_values() {
    // Φ((ε√n − Φ⁻¹(1−α)/2) / √(1/4 − ε²)) evaluated with scipy.stats.norm
    for (alpha, n, eps, want) in [
        ("0.05", "100", "0.1", "0.641499"),
        ("0.05", "400", "0.05", "0.639430"),
        ("0.01", "1000", "0.03", "0.333687"),
        ("0.05", "10000", "0.1", "1.000000"),
    ] {
        let out = ok(&["power", "--alpha", alpha, "--n-te", n, "--epsilon", eps]);
        assert_eq!(out.trim(), want, "alpha {alpha} n {n} eps {eps}");
    }
}

#[test]
fn power_outside_domain_is_a_usage_error() {
    for eps in ["0.6", "0", "-0.1", "0.5"] {
        let o = c2st(&["power", "--n-te", "100", "--epsilon", eps]);
        assert_eq!(o.status.code(), Some(2), "epsilon {eps}: {}", stderr(&o));
    }
    let o = c2st(&["power", "--n-te", "100", "--epsilon", "0.1", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn power_envelope_round_trips() {
    let dir = TempDir::new().unwrap();
    let first = ok(&["power", "--n-te", "100", "--epsilon", "0.1", "--json"]);
    let env: Value = serde_json::from_str(&first).unwrap();
    assert!(schema_errors(&env).is_empty());
    assert_eq!(env["schema_version"], "1.0");
    assert_eq!(env["command"], "power");
    assert_eq!(env["config"]["n_te"], 100);
    let saved = dir.path().join("power.json");
    fs::write(&saved, &first).unwrap();
    let again = json(&["power", "--replay", s(&saved), "--json"]);
    assert_eq!(again["outcome"], env["outcome"]);
    assert_eq!(again["config"], env["config"]);
}

#[test]
fn identical_files_rarely_reject() {
    let dir = TempDir::new().unwrap();
    let f = gaussian_file(dir.path(), "same.txt", 11, 200, 2, 0.0);
    let mut accepted = 0;
    for seed in 0..100 {
        let out = ok(&[
            "test",
            "--x",
            s(&f),
            "--y",
            s(&f),
            "--test",
            "c2st-knn",
            "--seed",
            &seed.to_string(),
            "--table",
        ]);
        let p: f64 = table_field(&out, "p_value").parse().unwrap();
        if p >= 0.05 {
            accepted += 1;
        }
    }
    assert!(accepted >= 90, "{accepted}/100");
}

#[test]
fn missing_file_names_the_path() {
    let dir = TempDir::new().unwrap();
    let f = gaussian_file(dir.path(), "a.txt", 1, 20, 1, 0.0);
    let missing = dir.path().join("nowhere.txt");
    let o = c2st(&["test", "--x", s(&f), "--y", s(&missing), "--test", "ks"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("nowhere.txt"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn univariate_test_on_multicolumn_data_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 1, 30, 3, 0.0);
    let b = gaussian_file(dir.path(), "b.txt", 2, 30, 3, 0.0);
    for test in ["ks", "kuiper", "wmw"] {
        let o = c2st(&["test", "--x", s(&a), "--y", s(&b), "--test", test]);
        assert_eq!(o.status.code(), Some(2), "{test}");
    }
    let c = gaussian_file(dir.path(), "c.txt", 3, 30, 2, 0.0);
    let o = c2st(&["test", "--x", s(&a), "--y", s(&c), "--test", "mmd"]);
    assert_eq!(o.status.code(), Some(4), "dimension mismatch: {}", stderr(&o));
}

#[test]
fn headers_comments_and_csv_are_read() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("x.csv");
    fs::write(&csv, "# generated\nheight,weight\n1.0,2.0\n\n3.5,4.0\n5,6\n-1,0.25\n").unwrap();
    let plain = dir.path().join("y.txt");
    fs::write(&plain, "1 2\n3.5 4\n5 6e0\n\t7   8\n").unwrap();
    let env = json(&["test", "--x", s(&csv), "--y", s(&plain), "--test", "mmd", "--seed", "1"]);
    assert_eq!(env["outcome"]["rows_x"], 4);
    assert_eq!(env["outcome"]["rows_y"], 4);
    assert_eq!(env["outcome"]["dim"], 2);
}

#[test]
fn malformed_values_are_file_errors_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    let good = gaussian_file(dir.path(), "good.txt", 1, 10, 1, 0.0);
    for (name, text, line) in [
        ("nan.txt", "1\n2\nNaN\n", "line 3"),
        ("word.txt", "1\n2\nabc\n4\n", "line 3"),
        ("ragged.txt", "1 2\n3\n", "line 2"),
        ("inf.txt", "1\ninf\n", "line 2"),
    ] {
        let bad = dir.path().join(name);
        fs::write(&bad, text).unwrap();
        let o = c2st(&["test", "--x", s(&good), "--y", s(&bad), "--test", "ks"]);
        assert_eq!(o.status.code(), Some(3), "{name}");
        let err = stderr(&o);
        assert!(err.contains(name) && err.contains(line), "{name}: {err}");
    }
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nothing\n\n").unwrap();
    let o = c2st(&["test", "--x", s(&good), "--y", s(&empty), "--test", "ks"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn test_envelope_replays_to_the_same_outcome() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 5, 150, 2, 0.0);
    let b = gaussian_file(dir.path(), "b.txt", 6, 150, 2, 0.4);
    for test in ["c2st-nn", "c2st-knn", "mmd"] {
        let first = ok(&[
            "test",
            "--x",
            s(&a),
            "--y",
            s(&b),
            "--test",
            test,
            "--seed",
            "42",
            "--epochs",
            "10",
        ]);
        let env: Value = serde_json::from_str(&first).unwrap();
        for key in [
            "schema_version",
            "toolkit_version",
            "command",
            "argv",
            "config",
            "outcome",
            "wall_time_seconds",
        ] {
            assert!(env.get(key).is_some(), "{test}: missing {key}");
        }
        assert_eq!(env["config"]["seed"], 42);
        let saved = dir.path().join(format!("{test}.json"));
        fs::write(&saved, &first).unwrap();
        let again = json(&["test", "--replay", s(&saved)]);
        assert_eq!(again["config"], env["config"], "{test}");
        assert_eq!(again["outcome"], env["outcome"], "{test}");
    }
}

#[test]
fn unseeded_runs_echo_the_seed_they_drew() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 5, 80, 1, 0.0);
    let b = gaussian_file(dir.path(), "b.txt", 6, 80, 1, 0.0);
    let first = ok(&["test", "--x", s(&a), "--y", s(&b), "--test", "c2st-knn"]);
    let env: Value = serde_json::from_str(&first).unwrap();
    let seed = env["config"]["seed"].as_u64().expect("seed echoed");
    let rerun = json(&[
        "test",
        "--x",
        s(&a),
        "--y",
        s(&b),
        "--test",
        "c2st-knn",
        "--seed",
        &seed.to_string(),
    ]);
    assert_eq!(rerun["outcome"], env["outcome"]);
}

#[test]
fn replay_refuses_extra_configuration() {
    let dir = TempDir::new().unwrap();
    let saved = dir.path().join("p.json");
    fs::write(&saved, ok(&["power", "--n-te", "100", "--epsilon", "0.1", "--json"])).unwrap();
    let o = c2st(&["power", "--replay", s(&saved), "--alpha", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = c2st(&["test", "--replay", s(&saved)]);
    assert_eq!(o.status.code(), Some(2), "wrong command: {}", stderr(&o));
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{\"hello\": 1}").unwrap();
    assert_eq!(c2st(&["power", "--replay", s(&junk)]).status.code(), Some(3));
}

#[test]
fn table_and_json_report_the_same_numbers() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 8, 120, 1, 0.0);
    let b = gaussian_file(dir.path(), "b.txt", 9, 120, 1, 0.3);
    for test in ["c2st-knn", "c2st-nn", "mmd", "ks", "kuiper", "wmw"] {
        let common = [
            "test",
            "--x",
            s(&a),
            "--y",
            s(&b),
            "--test",
            test,
            "--seed",
            "3",
            "--epochs",
            "10",
        ];
        let env = json(&common);
        let mut args = common.to_vec();
        args.push("--table");
        let text = ok(&args);
        for key in ["statistic", "p_value"] {
            let from_table: f64 = table_field(&text, key).parse().unwrap();
            let from_json = env["outcome"][key].as_f64().unwrap();
            assert_eq!(from_table.to_bits(), from_json.to_bits(), "{test} {key}");
        }
        assert_eq!(table_field(&text, "reject"), env["outcome"]["reject"].to_string());
    }
}

fn bench_rows(tsv: &str) -> Vec<Vec<String>> {
    tsv.lines()
        .skip(1)
        .map(|l| l.split('\t').map(String::from).collect())
        .collect()
}

#[test]
fn single_trial_rates_are_zero_or_one() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t");
    fs::create_dir(&out).unwrap();
    let env = json(&[
        "bench",
        "--experiment",
        "type1",
        "--trials",
        "1",
        "--tests",
        "ks,wmw",
        "--seed",
        "5",
        "--out",
        s(&out),
    ]);
    assert_eq!(env["config"]["grid"]["n"].as_array().unwrap().len(), 7);
    let rows = bench_rows(&fs::read_to_string(out.join("type1.tsv")).unwrap());
    assert_eq!(rows.len(), 14);
    let sizes: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(sizes.len(), 7);
    for r in &rows {
        assert!(r[10] == "0" || r[10] == "1", "{r:?}");
    }
    let table: Value = serde_json::from_str(&fs::read_to_string(out.join("type1.json")).unwrap()).unwrap();
    assert_eq!(table["rows"].as_array().unwrap().len(), 14);
}

#[test]
fn repeated_bench_writes_identical_files() {
    let dir = TempDir::new().unwrap();
    let (one, two) = (dir.path().join("one"), dir.path().join("two"));
    for out in [&one, &two] {
        fs::create_dir(out).unwrap();
        ok(&[
            "bench",
            "--experiment",
            "gauss-student",
            "--n",
            "40,80",
            "--nu",
            "3",
            "--trials",
            "4",
            "--tests",
            "c2st-knn,c2st-nn,ks",
            "--epochs",
            "5",
            "--seed",
            "17",
            "--out",
            s(out),
            "--table",
        ]);
    }
    for name in ["gauss-student.tsv", "gauss-student.json"] {
        assert_eq!(
            fs::read(one.join(name)).unwrap(),
            fs::read(two.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn bench_rejects_univariate_tests_on_sinusoid() {
    let dir = TempDir::new().unwrap();
    let o = c2st(&[
        "bench",
        "--experiment",
        "sinusoid",
        "--tests",
        "ks",
        "--trials",
        "1",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none(), "nothing written");
}

fn write_pairs(dir: &Path, count: usize) -> Vec<(String, String)> {
    let bench = synthetic_benchmark(7, count, 300, 0.25).unwrap();
    bench
        .iter()
        .enumerate()
        .map(|(i, (sample, truth))| {
            let name = format!("pair{i:02}.txt");
            let rows: Vec<Vec<f64>> = (0..sample.len()).map(|r| sample.row(r).to_vec()).collect();
            write_rows(&dir.join(&name), &rows);
            (name, truth.to_string())
        })
        .collect()
}

const QUICK_CAUSAL: [&str; 4] = ["--ensemble", "1", "--iterations", "300"];

#[test]
fn causal_directory_with_truth_file() {
    let dir = TempDir::new().unwrap();
    let pairs = dir.path().join("pairs");
    fs::create_dir(&pairs).unwrap();
    let truth = write_pairs(&pairs, 4);
    let truth_text: String = truth.iter().map(|(n, d)| format!("{n} {d}\n")).collect();
    let truth_path = pairs.join("truth.txt");
    fs::write(&truth_path, truth_text).unwrap();
    fs::write(pairs.join("pair99_des.txt"), "description, not data").unwrap();
    fs::write(pairs.join("three.txt"), "1 2 3\n4 5 6\n").unwrap();

    let mut args = vec!["causal", s(&pairs), "--truth", s(&truth_path), "--seed", "3"];
    args.extend(QUICK_CAUSAL);
    let env = json(&args);
    let records = env["outcome"]["pairs"].as_array().unwrap();
    assert_eq!(records.len(), 5, "data files only");
    let three = records
        .iter()
        .find(|r| r["file"].as_str().unwrap().ends_with("three.txt"))
        .unwrap();
    assert!(three["error"].is_string());
    let summary = &env["outcome"]["summary"];
    assert_eq!(summary["pairs"], 5);
    assert_eq!(summary["failed"], 1);
    assert_eq!(summary["scored"], 4);
    let correct = records.iter().filter(|r| r["correct"] == true).count();
    assert_eq!(summary["correct"], correct);

    let saved = dir.path().join("causal.json");
    fs::write(&saved, serde_json::to_string(&env).unwrap()).unwrap();
    let again = json(&["causal", "--replay", s(&saved)]);
    assert_eq!(again["outcome"], env["outcome"]);
}

#[test]
fn causal_single_file() {
    let dir = TempDir::new().unwrap();
    write_pairs(dir.path(), 1);
    let file = dir.path().join("pair00.txt");
    let mut args = vec!["causal", s(&file), "--seed", "1"];
    args.extend(QUICK_CAUSAL);
    let env = json(&args);
    let record = &env["outcome"]["pairs"][0];
    let v = &record["verdict"];
    let direction = v["direction"].as_str().unwrap();
    assert!(direction == "X->Y" || direction == "Y->X", "{direction}");
    assert!(v["t_xy"].is_number() && v["t_yx"].is_number());

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 2 3\n").unwrap();
    let o = c2st(&["causal", s(&bad), "--ensemble", "1"]);
    assert_ne!(o.status.code(), Some(0));
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn interpret_writes_feature_files_only_for_the_network() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 1, 200, 3, 0.0);
    let b = gaussian_file(dir.path(), "b.txt", 2, 200, 3, 0.8);
    let nn_out = dir.path().join("nn");
    let env = json(&[
        "interpret",
        "--x",
        s(&a),
        "--y",
        s(&b),
        "--test",
        "c2st-nn",
        "--epochs",
        "20",
        "--seed",
        "4",
        "--out",
        s(&nn_out),
        "--top",
        "5",
    ]);
    assert_eq!(env["outcome"]["has_features"], true);
    assert_eq!(
        listing(&nn_out),
        [
            "confident_x.tsv",
            "confident_y.tsv",
            "features.tsv",
            "first_layer.tsv",
            "least_confident.tsv",
            "ranked.tsv",
            "report.json"
        ]
    );
    let confident = fs::read_to_string(nn_out.join("confident_y.tsv")).unwrap();
    assert_eq!(confident.lines().count(), 6, "header and five rows");
    let ranked = fs::read_to_string(nn_out.join("ranked.tsv")).unwrap();
    assert_eq!(
        ranked.lines().count() - 1,
        env["outcome"]["test_examples"].as_u64().unwrap() as usize
    );

    let model = dir.path().join("model");
    ok(&[
        "test",
        "--x",
        s(&a),
        "--y",
        s(&b),
        "--test",
        "c2st-knn",
        "--seed",
        "4",
        "--save-model",
        s(&model),
    ]);
    let knn_out = dir.path().join("knn");
    let env = json(&["interpret", "--model", s(&model), "--out", s(&knn_out)]);
    assert_eq!(env["outcome"]["has_features"], false);
    assert_eq!(
        listing(&knn_out),
        [
            "confident_x.tsv",
            "confident_y.tsv",
            "least_confident.tsv",
            "ranked.tsv",
            "report.json"
        ]
    );
}

#[test]
fn interpret_on_one_column_gives_one_weight_column() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 1, 150, 1, 0.0);
    let b = gaussian_file(dir.path(), "b.txt", 2, 150, 1, 1.0);
    let out = dir.path().join("out");
    ok(&[
        "interpret",
        "--x",
        s(&a),
        "--y",
        s(&b),
        "--epochs",
        "10",
        "--seed",
        "2",
        "--out",
        s(&out),
    ]);
    for name in ["first_layer.tsv", "features.tsv"] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        for line in text.lines() {
            assert_eq!(line.split('\t').count(), 2, "{name}: {line}");
        }
    }
    let layer = fs::read_to_string(out.join("first_layer.tsv")).unwrap();
    assert_eq!(layer.lines().count(), 21, "header and twenty units");
}

#[test]
fn interpret_needs_a_classifier() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 1, 30, 1, 0.0);
    let out = dir.path().join("o");
    let o = c2st(&[
        "interpret",
        "--x",
        s(&a),
        "--y",
        s(&a),
        "--test",
        "ks",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = c2st(&[
        "test",
        "--x",
        s(&a),
        "--y",
        s(&a),
        "--test",
        "wmw",
        "--save-model",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = c2st(&["interpret", "--model", s(&dir.path().join("none")), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_flags_exit_with_usage_code() {
    assert_eq!(
        c2st(&["test", "--test", "nope", "--x", "a", "--y", "b"]).status.code(),
        Some(2)
    );
    assert_eq!(c2st(&["power", "--n-te", "10"]).status.code(), Some(2));
    assert_eq!(c2st(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        c2st(&["power", "--json", "--table", "--n-te", "10", "--epsilon", "0.1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn schema_rejects_malformed_envelopes() {
    let good = json(&["power", "--n-te", "100", "--epsilon", "0.1", "--json"]);
    let mut bad = good.clone();
    bad["outcome"]["power"] = Value::from(1.5);
    assert!(!schema_errors(&bad).is_empty());
    let mut bad = good.clone();
    bad.as_object_mut().unwrap().remove("config");
    assert!(!schema_errors(&bad).is_empty());
    let mut bad = good.clone();
    bad["schema_version"] = Value::from("2.0");
    assert!(!schema_errors(&bad).is_empty());
    let mut extended = good;
    extended["outcome"]["note"] = Value::from("fields may be added");
    assert!(schema_errors(&extended).is_empty());
}

#[test]
fn envelopes_with_every_option_match_the_schema() {
    let dir = TempDir::new().unwrap();
    let a = gaussian_file(dir.path(), "a.txt", 1, 60, 1, 0.0);
    let b = gaussian_file(dir.path(), "b.txt", 2, 60, 1, 0.5);
    for extra in [
        vec!["--test", "mmd", "--bandwidth", "0.7"],
        vec!["--test", "c2st-knn", "--k", "3", "--exact-null", "--two-sided"],
        vec![
            "--test",
            "c2st-nn",
            "--hidden",
            "4",
            "--epochs",
            "3",
            "--batch-size",
            "16",
            "--learning-rate",
            "0.01",
        ],
        vec!["--test", "wmw", "--alpha", "0.1", "--split", "0.3"],
    ] {
        let mut args = vec!["test", "--x", s(&a), "--y", s(&b), "--seed", "9"];
        args.extend(extra);
        json(&args);
    }
}

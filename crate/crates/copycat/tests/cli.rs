use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use copycat::persist::{load_model, load_standardizer};
use copycat_core::data::Standardizer;
use copycat_core::models::{impurity_feature_importance, Classifier, Family, Model, TrainConfig};
use serde_json::Value;
use tempfile::TempDir;

fn copycat<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_copycat"))
        .args(args)
        .env_remove("COPYCAT_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(out: Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Credit CSV plus a trained model of `family` in a fresh directory.
fn fixture(family: &str) -> (TempDir, PathBuf, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("credit.csv");
    let model = dir.path().join(format!("{family}.json"));
    ok(copycat(["generate", "credit", "--seed", "3", "--rows", "600", "--out", p(&data)]));
    ok(copycat([
        "train", "--data", p(&data), "--label", "status", "--model", family, "--split", "0.8", "--seed", "3",
        "--out", p(&model),
    ]));
    (dir, data, model)
}

fn copy_args<'a>(model: &'a Path, data: &'a Path, out: &'a Path, runs: &'a str) -> Vec<&'a str> {
    vec![
        "copy", "--oracle", p(model), "--data", p(data), "--n", "3000", "--n-test", "2000", "--runs", runs,
        "--seed", "11", "--split", "0.8", "--out", p(out),
    ]
}

#[test]
fn unknown_model_is_a_usage_error() {
    let out = copycat(["train", "--data", "x.csv", "--label", "y", "--model", "forest", "--out", "m.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_scenario_is_a_usage_error() {
    let out = copycat(["scenario", "scenario3", "--out", "dir"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_data_file_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = copycat([
        "train", "--data", p(&dir.path().join("absent.csv")), "--label", "y", "--model", "lr", "--out",
        p(&dir.path().join("m.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn unknown_config_key_is_named() {
    let (dir, data, _) = fixture("lr");
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"version": 1, "train": {"lr": {"iterations": 10, "momentum": 0.9}}}"#).unwrap();
    let out = copycat([
        "train", "--data", p(&data), "--label", "status", "--model", "lr", "--config", p(&cfg), "--out",
        p(&dir.path().join("m.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("momentum"));

    fs::write(&cfg, r#"{"train": {}}"#).unwrap();
    let out = copycat([
        "train", "--data", p(&data), "--label", "status", "--model", "lr", "--config", p(&cfg), "--out",
        p(&dir.path().join("m.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("version"));
}

#[test]
fn saved_model_reloads_to_identical_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = dir.path().join("credit.csv");
    let model_path = dir.path().join("lr.json");
    ok(copycat(["generate", "credit", "--seed", "5", "--rows", "400", "--out", p(&data_path)]));
    let stdout = ok(copycat([
        "train", "--data", p(&data_path), "--label", "status", "--model", "lr", "--out", p(&model_path),
    ]));
    assert!(stdout.contains("train accuracy: "));
    assert!(!stdout.contains("test accuracy"));

    let data = copycat::io::load_dataset(&data_path, Some("status"), None, None).unwrap();
    let s = Standardizer::fit(data.features()).unwrap();
    let z = s.transform(data.features()).unwrap();
    let trained = Model::train(Family::Lr, &data.with_features(z.clone()).unwrap(), &TrainConfig::default()).unwrap();

    let file = load_model(&model_path).unwrap();
    assert_eq!(file.model, trained);
    assert_eq!(load_standardizer(&model_path).unwrap(), Some(s));
    assert_eq!(file.model.predict_batch(&z).unwrap(), trained.predict_batch(&z).unwrap());
    assert_eq!(file.class_names.as_deref(), Some(data.class_names()));
}

#[test]
fn split_prints_test_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.csv");
    ok(copycat(["generate", "toy", "--rows", "400", "--out", p(&data)]));
    let stdout = ok(copycat([
        "train", "--data", p(&data), "--label", "label", "--model", "cart", "--split", "0.75", "--out",
        p(&dir.path().join("t.json")),
    ]));
    assert!(stdout.contains("test accuracy: "), "{stdout}");
}

#[test]
fn single_run_reports_zero_spread() {
    let (dir, data, model) = fixture("gbt");
    let out = dir.path().join("study.json");
    let stdout = ok(copycat(copy_args(&model, &data, &out, "1")));
    assert!(stdout.contains("copy accuracy: ") && stdout.contains(" ± 0.000"), "{stdout}");
    let json: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let summaries = &json["study"]["summaries"];
    assert_eq!(summaries["original_test_accuracy"]["std"], 0.0);
    assert_eq!(summaries["synthetic_test_fidelity"]["std"], 0.0);
    assert_eq!(json["study"]["per_run"][0]["synthetic_train_accuracy"], 1.0);
}

#[test]
fn copy_output_is_byte_identical_across_runs_and_threads() {
    let (dir, data, model) = fixture("gbt");
    let outs: Vec<PathBuf> = (0..3).map(|i| dir.path().join(format!("s{i}.json"))).collect();
    ok(copycat(copy_args(&model, &data, &outs[0], "4")));
    let mut a = vec!["--threads", "1"];
    a.extend(copy_args(&model, &data, &outs[1], "4"));
    ok(copycat(a));
    let mut b = vec!["--threads", "4"];
    b.extend(copy_args(&model, &data, &outs[2], "4"));
    ok(copycat(b));
    let first = fs::read(&outs[0]).unwrap();
    for o in &outs[1..] {
        assert_eq!(first, fs::read(o).unwrap());
    }
}

#[test]
fn threads_fall_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_copycat"))
        .args(["generate", "toy", "--rows", "10", "--out", "/dev/null"])
        .env("COPYCAT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn saved_copy_is_an_unconstrained_tree() {
    let (dir, data, model) = fixture("mlp");
    let copy = dir.path().join("copy.json");
    let study = dir.path().join("s.json");
    let mut args = copy_args(&model, &data, &study, "3");
    args.extend(["--save-copy", p(&copy)]);
    ok(copycat(args));
    let file = load_model(&copy).unwrap();
    assert_eq!(file.model.family(), Family::Cart);
    assert_eq!(file.model.input_dim(), 19);
}

#[test]
fn scenarios_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path());
    let fast = ["--n", "2000", "--runs", "2", "--seed", "1", "--out", out];
    for (name, extra) in [
        ("toy", vec!["toy_grid.csv"]),
        ("scenario1", vec![]),
        ("scenario2", vec!["scenario2_importance.csv"]),
    ] {
        let mut args = vec!["scenario", name];
        args.extend(fast);
        let stdout = ok(copycat(args));
        assert!(stdout.contains("copy accuracy: "), "{stdout}");
        for suffix in ["report.json", "histogram.csv", "runs.csv"] {
            assert!(dir.path().join(format!("{name}_{suffix}")).is_file(), "{name}_{suffix}");
        }
        for f in extra {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
    }
    let grid = fs::read_to_string(dir.path().join("toy_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 1 + 200 * 200);
    let runs = fs::read_to_string(dir.path().join("scenario1_runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 3);
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("scenario1_report.json")).unwrap()).unwrap();
    assert_eq!(report["copy_input_dim"], 19);
    assert_eq!(report["config"]["copy"]["n_train"], 2000);
}

#[test]
fn paper_scale_shows_in_config_echo() {
    let config = |extra: &[&str]| -> Value {
        let mut args = vec!["scenario", "scenario2", "--print-config", "--out", "unused"];
        args.extend(extra);
        serde_json::from_str(&ok(copycat(args))).unwrap()
    };
    let desk = config(&[]);
    assert_eq!(desk["copy"]["n_train"], 100_000);
    assert_eq!(desk["copy"]["runs"], 30);
    let full = config(&["--paper-scale"]);
    assert_eq!(full["paper_scale"], true);
    assert_eq!(full["copy"]["n_train"], 1_000_000);
    assert_eq!(full["copy"]["runs"], 100);
}

fn read_importance(path: &Path) -> Vec<(String, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("feature,importance"));
    lines
        .map(|l| {
            let (name, v) = l.rsplit_once(',').unwrap();
            (name.to_owned(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn cart_importance_sums_to_one() {
    let (dir, _, model) = fixture("cart");
    let out = dir.path().join("imp.csv");
    ok(copycat(["importance", "--model", p(&model), "--out", p(&out)]));
    let rows = read_importance(&out);
    assert_eq!(rows.len(), 19);
    assert_eq!(rows[0].0, "age");
    assert!((rows.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() <= 1e-12);
}

#[test]
fn lr_importance_is_refused() {
    let (dir, _, model) = fixture("lr");
    let out = copycat(["importance", "--model", p(&model), "--out", p(&dir.path().join("imp.csv"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("importance requires tree model"));
}

#[test]
fn gbt_importance_matches_library() {
    let (dir, _, model) = fixture("gbt");
    let out = dir.path().join("imp.csv");
    ok(copycat(["importance", "--model", p(&model), "--out", p(&out)]));
    let expected = impurity_feature_importance(&load_model(&model).unwrap().model).unwrap();
    let got: Vec<f64> = read_importance(&out).into_iter().map(|r| r.1).collect();
    assert_eq!(got, expected.values);
}

#[test]
fn sample_writes_labeled_points() {
    let (dir, data, model) = fixture("gbt");
    let out = dir.path().join("synthetic.csv");
    ok(copycat(["sample", "--oracle", p(&model), "--data", p(&data), "--n", "250", "--seed", "2", "--out", p(&out)]));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().ends_with(",synthetic_label"));
    assert_eq!(text.lines().count(), 251);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",repaid") || l.ends_with(",default")));
}

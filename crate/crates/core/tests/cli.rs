//! End-to-end checks of the binary: output shapes and exit codes
//! (0 success, 1 validation, 2 analysis).

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_punctstats"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[test]
fn tokenize_emits_jsonl() {
    let out = bin()
        .args(["tokenize", "--input"])
        .arg(fixture("en_sample.txt"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let first: serde_json::Value = serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
    assert_eq!(first["surface"], "The");
    assert_eq!(first["kind"], "word");
}

#[test]
fn series_csv_and_meta() {
    let mut common = vec![
        "series".to_string(),
        "--input".into(),
        fixture("zh_thirty.txt").display().to_string(),
        "--lexicon".into(),
        fixture("zh_lexicon.txt").display().to_string(),
        "--unit".into(),
        "words".into(),
        "--scope".into(),
        "terminal".into(),
    ];
    let out = bin().args(&common).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("index,value\n"));
    assert_eq!(stdout.lines().count(), 31); // header + 30 sentences

    common.push("--meta".into());
    let out = bin().args(&common).output().unwrap();
    assert!(out.status.success());
    let meta: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(meta["n"], 30);
    assert_eq!(meta["scope"], "terminal_only");
}

#[test]
fn missing_input_is_validation_error() {
    let out = bin()
        .args(["tokenize", "--input", "/nonexistent.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cjk_without_lexicon_is_validation_error() {
    let out = bin()
        .args(["tokenize", "--input"])
        .arg(fixture("zh_thirty.txt"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn short_series_is_analysis_error() {
    // The Weibull fitter needs a floor of at least 30 values; force a
    // higher floor than the fixture provides.
    let out = bin()
        .args(["weibull", "--input"])
        .arg(fixture("en_sample.txt"))
        .args(["--floor", "100000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = serde_json::json!({
        "documents": [
            {"path": fixture("zh_thirty.txt").display().to_string(), "id": "zh"},
            {"path": fixture("en_sample.txt").display().to_string(), "id": "en"},
        ],
        "lexicon": fixture("zh_lexicon.txt").display().to_string(),
    });
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["analyze", "--config"])
        .arg(&config_path)
        .arg("--output-dir")
        .arg(&out_dir)
        .args(["--plots", "svg"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["documents"].as_array().unwrap().len(), 2);
    assert_eq!(report["documents"][0]["id"], "zh");
    assert!(out_dir.join("zh__rank_table.csv").exists());
    assert!(out_dir.join("zh__rank_frequency.svg").exists());
}

#[test]
fn bad_scale_mode_is_validation_error() {
    let out = bin()
        .args(["mfdfa", "--input"])
        .arg(fixture("en_sample.txt"))
        .args(["--scale-mode", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

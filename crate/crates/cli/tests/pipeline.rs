use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lgx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgx")).args(args).output().expect("run lgx")
}

fn ok(args: &[&str]) -> String {
    let out = lgx(args);
    assert!(out.status.success(), "lgx {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    lgx(args).status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn bedroom(dir: &Path) {
    fs::write(dir.join("vocab.json"), r#"["bed", "wall", "lamp"]"#).unwrap();
    fs::write(
        dir.join("dataset.jsonl"),
        concat!(
            r#"{"id":"a","objects":["bed","wall"],"predicted_class":"bedroom"}"#,
            "\n",
            r#"{"id":"b","objects":["bed","lamp"],"predicted_class":"bedroom"}"#,
            "\n",
        ),
    )
    .unwrap();
    fs::write(
        dir.join("model.json"),
        r#"{"weights":{"bedroom":{"bed":0.9,"lamp":0.05,"wall":0.05}},"monotone":true,"seed":0}"#,
    )
    .unwrap();
}

#[test]
fn gen_writes_requested_size() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["gen", "--classes", "5", "--vocab", "40", "--per-class", "50", "--seed", "7", "--out-dir", d]);
    let text = fs::read_to_string(dir.path().join("dataset.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 250);
    let vocab = json(&dir.path().join("vocab.json"));
    assert_eq!(vocab.as_array().unwrap().len(), 40);
}

#[test]
fn bedroom_formula() {
    let dir = tempfile::tempdir().unwrap();
    bedroom(dir.path());
    let d = dir.path().to_str().unwrap();
    ok(&["explain", "--out-dir", d]);
    let stdout = ok(&["cover", "--support-fraction", "1.0", "--out-dir", d]);
    assert!(stdout.contains("bedroom: (bed ∧ wall)_50% ∨ (bed ∧ lamp)_50%"), "{stdout}");
    let hidden = ok(&["cover", "--support-fraction", "1.0", "--min-pct", "60", "--out-dir", d]);
    assert!(!hidden.contains("bed ∧"), "{hidden}");
    let cover = json(&dir.path().join("cover_bedroom.json"));
    assert_eq!(cover["clauses"].as_array().unwrap().len(), 2);
}

#[test]
fn full_pipeline_on_planted_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["gen", "--planted", "--classes", "3", "--seed", "4", "--out-dir", d]);
    ok(&["explain", "--exact", "--out-dir", d]);
    ok(&["cover", "--out-dir", d]);
    ok(&["mclist", "--support-fraction", "1.0", "--out-dir", d]);
    ok(&["eval", "--support-fraction", "1.0", "--out-dir", d]);
    let metrics = json(&dir.path().join("metrics.json"));
    assert_eq!(metrics["list_accuracy"]["support"]["mscx"].as_f64(), Some(1.0));
    assert!(metrics["fidelity"]["fid_minus_mean"].as_f64().unwrap() >= 0.95);
    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        if name.starts_with("coverage_") && name.ends_with(".csv") {
            let text = fs::read_to_string(&path).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next(), Some("clause_index,support_coverage_pct,validation_coverage_pct"));
            let last = lines.last().unwrap();
            let support: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(support, 100.0, "{name}: {last}");
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let steps: [&[&str]; 5] = [
        &["gen", "--classes", "3", "--per-class", "10", "--seed", "11", "--out-dir", d],
        &["explain", "--workers", "4", "--out-dir", d],
        &["cover", "--out-dir", d],
        &["mclist", "--out-dir", d],
        &["eval", "--verbose", "--out-dir", d],
    ];
    let snapshot = || -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| (p.file_name().unwrap().to_str().unwrap().to_string(), fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    for s in steps {
        ok(s);
    }
    let first = snapshot();
    for s in steps {
        ok(s);
    }
    assert_eq!(first, snapshot());
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "seed = 3\n[gen]\nclasses = 2\nper_class = 4\n").unwrap();
    ok(&["--config", cfg.to_str().unwrap(), "gen", "--per-class", "6", "--out-dir", d]);
    let text = fs::read_to_string(dir.path().join("dataset.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 12);
    let manifest = json(&dir.path().join("gen.manifest.json"));
    assert_eq!(manifest["args"]["seed"], 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(code(&["explain", "--out-dir", d]), 1);
    assert_eq!(code(&["explain", "--bogus-flag"]), 1);

    bedroom(dir.path());
    fs::write(dir.path().join("model.json"), r#"{"weights":{"bedroom":{}},"monotone":true,"seed":0}"#).unwrap();
    assert_eq!(code(&["explain", "--out-dir", d]), 2);

    bedroom(dir.path());
    fs::write(
        dir.path().join("explanations.jsonl"),
        r#"{"id":"a","class":"bedroom","mscxs":[{"concepts":["bed"],"score_ratio":0.9}],"status":"found"}"#,
    )
    .unwrap();
    assert_eq!(code(&["verify", "--skip-synthetic", "--explanations", "explanations.jsonl", "--out-dir", d]), 1);
    let e = dir.path().join("explanations.jsonl");
    assert_eq!(code(&["verify", "--skip-synthetic", "--explanations", e.to_str().unwrap(), "--out-dir", d]), 3);
}

#[test]
fn verify_passes_on_small_suites() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["verify", "--seeds", "5", "--max-k", "8", "--out-dir", d]);
    let report = json(&dir.path().join("verify_report.json"));
    assert!(report["violations"].as_array().unwrap().is_empty());
}

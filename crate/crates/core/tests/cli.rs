use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn learnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_learnlab")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn minimal_vc_run_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/minimal_vc.json");
    let out = tmp.path().join("run");
    let o = learnlab(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = fs::read_to_string(out.join("00-vc/trace.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("thresholds,10,4,1,1,"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("00-vc/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["result"]["vc"], 1);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 42);

    let o = learnlab(&["report", "--in", out.to_str().unwrap()]);
    assert!(o.status.success());
    let md = fs::read_to_string(out.join("report.md")).unwrap();
    assert!(md.contains("| vc | thresholds | 10 | 4 | 1 | yes | `00-vc/summary.json` |"), "{md}");
}

#[test]
fn seed_override_changes_block_seeds() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 1, "experiments": [{"kind": "levels", "params": {"level": 0, "params": {"trials": 50}}}]}"#,
    );
    let read_seed = |dir: &Path| {
        let s: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join("00-levels/summary.json")).unwrap()).unwrap();
        s["seed"].as_u64().unwrap()
    };
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(learnlab(&["run", "--config", &cfg, "--out", a.to_str().unwrap()]).status.success());
    let o = learnlab(&["run", "--config", &cfg, "--out", b.to_str().unwrap(), "--seed-override", "2"]);
    assert!(o.status.success());
    assert_ne!(read_seed(&a), read_seed(&b));
}

#[test]
fn unknown_kind_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"seed": 1, "experiments": [{"kind": "foo", "params": {}}]}"#);
    let out = tmp.path().join("run");
    let o = learnlab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"foo\""));
    assert!(!out.join("manifest.json").exists());
}

#[test]
fn malformed_params_exit_2_with_path() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 1, "experiments": [{"kind": "vc", "params": {"class": {"kind": "circles"}, "universe": [1], "cap": 2}}]}"#,
    );
    let o = learnlab(&["run", "--config", &cfg, "--out", tmp.path().join("r").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("experiments[0].params.class"));
}

#[test]
fn failing_block_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    // SUPERFINITE has finite languages, so generation refuses it
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 1, "experiments": [{"name": "bad", "kind": "limit-generate", "params": {
            "class": {"kind": "superfinite"}, "target": {"kind": "all"}, "generator": "intersection", "horizon": 5}}]}"#,
    );
    let o = learnlab(&["run", "--config", &cfg, "--out", tmp.path().join("r").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("00-bad"));
}

#[test]
fn report_without_manifest_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = learnlab(&["report", "--in", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing manifest"));
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tscl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tscl"))
        .args(args)
        .output()
        .expect("spawn tscl")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_trace_and_summary() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "w.cfg", "label = w\nteacher.algorithm = window\n");
    let out = dir.path().join("out");
    let result = tscl(&[
        "run",
        "--config",
        s(&config),
        "--seed",
        "4",
        "--out",
        s(&out),
        "--quiet",
    ]);
    assert_eq!(
        result.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    assert!(result.stdout.is_empty());

    let trace = fs::read_to_string(out.join("trace_4.csv")).unwrap();
    assert!(trace.starts_with("t,action,reward,score_0,"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary_4.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 4);
    assert_eq!(summary["label"], "w");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        "s.cfg",
        "teacher.algorithm = sampling\nteacher.formulation = batch\n",
    );
    let read = |sub: &str| {
        let out = dir.path().join(sub);
        let result = tscl(&[
            "run",
            "--config",
            s(&config),
            "--seed",
            "9",
            "--out",
            s(&out),
            "--quiet",
        ]);
        assert_eq!(result.status.code(), Some(0));
        fs::read(out.join("trace_9.csv")).unwrap()
    };
    assert_eq!(read("a"), read("b"));
}

#[test]
fn sweep_writes_one_row_per_config() {
    let dir = TempDir::new().unwrap();
    let a = write_config(dir.path(), "a.cfg", "label = uniform\nteacher.algorithm = uniform\n");
    let b = write_config(dir.path(), "b.cfg", "label = online\nteacher.algorithm = online\n");
    let out = dir.path().join("sweep");
    let result = tscl(&[
        "sweep",
        "--config",
        s(&a),
        "--config",
        s(&b),
        "--seeds",
        "0..3",
        "--out",
        s(&out),
        "--quiet",
    ]);
    assert_eq!(
        result.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let csv = fs::read_to_string(out.join("aggregate.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("uniform,3,"));
    assert!(lines[2].starts_with("online,3,"));
}

#[test]
fn serial_and_parallel_sweeps_match() {
    let dir = TempDir::new().unwrap();
    let a = write_config(
        dir.path(),
        "a.cfg",
        "teacher.algorithm = window\nteacher.formulation = batch\n",
    );
    let sweep = |sub: &str, extra: &[&str]| {
        let out = dir.path().join(sub);
        let mut args = vec![
            "sweep",
            "--config",
            s(&a),
            "--seeds",
            "0..6",
            "--format",
            "json",
            "--quiet",
        ];
        args.extend_from_slice(&["--out", s(&out)]);
        args.extend_from_slice(extra);
        assert_eq!(tscl(&args).status.code(), Some(0));
        fs::read(out.join("aggregate.json")).unwrap()
    };
    assert_eq!(sweep("serial", &["--serial"]), sweep("parallel", &[]));
}

#[test]
fn compare_reports_relative_change() {
    let dir = TempDir::new().unwrap();
    let uniform = write_config(
        dir.path(),
        "u.cfg",
        "label = u\nteacher.algorithm = uniform\nteacher.formulation = batch\n",
    );
    let window = write_config(
        dir.path(),
        "w.cfg",
        "label = w\nteacher.algorithm = window\nteacher.formulation = batch\n",
    );
    for (cfg, sub) in [(&uniform, "u"), (&window, "w")] {
        let out = dir.path().join(sub);
        let result = tscl(&[
            "sweep",
            "--config",
            s(cfg),
            "--seeds",
            "0..4",
            "--out",
            s(&out),
            "--format",
            "json",
            "--quiet",
        ]);
        assert_eq!(result.status.code(), Some(0));
    }
    let result = tscl(&[
        "compare",
        s(&dir.path().join("u/aggregate.json")),
        s(&dir.path().join("w/aggregate.json")),
    ]);
    assert_eq!(
        result.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let text = String::from_utf8(result.stdout).unwrap();
    let median = text
        .lines()
        .find(|l| l.starts_with("median_steps,u,w,"))
        .expect("median row");
    let change: f64 = median.rsplit(',').next().unwrap().parse().unwrap();
    assert!(change < 0.0, "window should need fewer steps: {median}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(tscl(&["run", "--bogus"]).status.code(), Some(2));
    assert_eq!(tscl(&["frobnicate"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "a.cfg", "teacher.algorithm = uniform\n");
    assert_eq!(
        tscl(&["sweep", "--config", s(&config), "--seeds", "ten"]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_config_is_a_runtime_failure() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let bad = write_config(dir.path(), "bad.cfg", "teacher.algorithm = window\nteacher.alpha = 3\n");
    let result = tscl(&["run", "--config", s(&bad), "--out", s(&out)]);
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stderr).contains("alpha"));

    let garbled = write_config(dir.path(), "garbled.cfg", "this is not a config\n");
    assert_eq!(
        tscl(&["run", "--config", s(&garbled), "--out", s(&out)]).status.code(),
        Some(1)
    );
    let missing = dir.path().join("missing.cfg");
    assert_eq!(
        tscl(&["run", "--config", s(&missing), "--out", s(&out)]).status.code(),
        Some(1)
    );
}

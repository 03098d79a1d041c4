use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn zitterlab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zitterlab"));
    c.env_remove("ZITTERLAB_OUT");
    c
}

fn run(args: &[&str]) -> Output {
    zitterlab().args(args).output().expect("binary runs")
}

fn scenario(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, body).unwrap();
    p
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

/// Rows of a CSV with a schema line and a header, as (header, rows).
fn csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let body = std::fs::read_to_string(path).unwrap();
    let mut lines = body.lines();
    assert!(lines.next().unwrap().starts_with("# zitterlab-"));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

const REST: &str = r#"{"spin": {"theta": 0.4, "phi": 1.1}, "span": {"periods": 2}}"#;

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "--suite", "all"]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("overall: PASS (seed 42)"));
}

#[test]
fn verify_algebra_runs_sixteen_anticommutators() {
    let o = run(&["verify", "--suite", "algebra", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    let anti = checks.iter().filter(|c| c["name"].as_str().unwrap().starts_with('{')).count();
    assert_eq!(anti, 16);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_gordon_reports_seed_and_error() {
    let o = run(&["verify", "--suite", "gordon", "--samples", "200", "--seed", "42", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["samples"], 200);
    for c in v["suites"][0]["checks"].as_array().unwrap() {
        assert!(c["value"].as_f64().unwrap() < 1e-11);
    }
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(
        dir.path(),
        "drive",
        r#"{"spin": {"random": true}, "velocity": [0.2, 0, 0], "field": {"kind": "uniform", "e": [0, 0.001, 0], "b": [0, 0, 0.01]}, "span": {"periods": 3}, "outputs": ["trajectory", "plots"]}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["simulate", s.to_str().unwrap(), "--seed", "7", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", text(&o));
    }
    for f in ["drive.csv", "drive.jsonl", "drive.circle.svg", "drive.helix.svg", "drive.drift.svg"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let o = run(&["simulate", s.to_str().unwrap(), "--seed", "8", "--out", b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_ne!(std::fs::read(a.join("drive.csv")).unwrap(), std::fs::read(b.join("drive.csv")).unwrap());
}

#[test]
fn rest_frame_trajectory_is_a_circle() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "rest", REST);
    let o = run(&["simulate", s.to_str().unwrap(), "--format", "csv", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(!dir.path().join("rest.jsonl").exists());
    let (h, rows) = csv(&dir.path().join("rest.csv"));
    assert_eq!(h.len(), 18);
    let (x1, y1) = (column(&h, "x1"), column(&h, "y1"));
    for r in &rows {
        let d: f64 = (0..3).map(|k| (r[x1 + k] - r[y1 + k]).powi(2)).sum::<f64>().sqrt();
        assert!((d - 0.5).abs() < 1e-12, "{d}");
    }
}

#[test]
fn boosted_trajectory_drifts() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "boost", r#"{"velocity": [0.5, 0, 0], "spin": {"theta": 0}, "span": {"periods": 4}}"#);
    let o = run(&["simulate", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", text(&o));
    let (h, rows) = csv(&dir.path().join("boost.csv"));
    let (tau, x1, y1) = (column(&h, "tau"), column(&h, "x1"), column(&h, "y1"));
    let gamma = 1.0 / 0.75f64.sqrt();
    for r in &rows {
        // inertia center moves uniformly with π/m, charge oscillates about it
        assert!((r[y1] - gamma * 0.5 * r[tau]).abs() < 1e-12);
        assert!((r[x1] - r[y1]).abs() <= 0.5 * gamma + 1e-12);
    }
    let last = rows.last().unwrap();
    assert!(last[x1] > 5.0);
}

#[test]
fn si_output_units() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "rest", REST);
    let o = run(&[
        "simulate",
        s.to_str().unwrap(),
        "--units",
        "si",
        "--format",
        "csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let (h, rows) = csv(&dir.path().join("rest.csv"));
    let (x1, y1) = (column(&h, "x1"), column(&h, "y1"));
    let d: f64 = (0..3).map(|k| (rows[5][x1 + k] - rows[5][y1 + k]).powi(2)).sum::<f64>().sqrt();
    assert!((d / 1.9308e-13 - 1.0).abs() < 1e-4, "{d}");
}

#[test]
fn uniform_field_monitors_are_bounded() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(
        dir.path(),
        "b",
        r#"{"spin": {"theta": 0}, "field": {"kind": "uniform", "b": [0, 0, 0.01]}, "span": {"periods": 20}}"#,
    );
    assert!(run(&["simulate", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]).status.success());
    let (h, rows) = csv(&dir.path().join("b.csv"));
    let (c, d) = (column(&h, "constraint"), column(&h, "energy_drift"));
    for r in &rows {
        assert!(r[c].abs() < 1e-7 && r[d].abs() < 1e-7);
    }
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "rest", REST);
    let out = dir.path().join("env-out");
    let o = zitterlab().env("ZITTERLAB_OUT", &out).args(["simulate", s.to_str().unwrap()]).output().unwrap();
    assert!(o.status.success(), "{}", text(&o));
    assert!(out.join("rest.csv").exists() && out.join("rest.jsonl").exists());
}

#[test]
fn malformed_scenario_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "bad", r#"{"spin": {"theta": 0}, "span": {"periods": "two"}}"#);
    let o = run(&["simulate", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(text(&o).contains("span.periods"), "{}", text(&o));

    let s = scenario(dir.path(), "fast", r#"{"spin": {"theta": 0}, "span": {"periods": 1}, "velocity": [1.2, 0, 0]}"#);
    let o = run(&["simulate", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(text(&o).contains("`velocity`"), "{}", text(&o));
}

#[test]
fn fieldmap_rest_frame_columns() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(
        dir.path(),
        "map",
        r#"{"spin": {"theta": 0.9, "phi": 0.2}, "span": {"periods": 1},
            "grid": {"t": {"min": 0, "max": 2, "n": 5}, "x": {"min": -1, "max": 1, "n": 4}, "z": {"min": -1, "max": 1, "n": 3}}}"#,
    );
    let o = run(&["fieldmap", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", text(&o));
    let (h, rows) = csv(&dir.path().join("map.fieldmap.csv"));
    assert_eq!(rows.len(), 60);
    let (mag, conv, gordon, u) = (column(&h, "mag1"), column(&h, "conv0"), column(&h, "gordon0"), column(&h, "u0"));
    for r in &rows {
        assert_eq!(&r[mag..mag + 3], &[0.0, 0.0, 0.0]);
        assert!((r[conv] - 1.0).abs() < 1e-14 && r[conv + 1..conv + 4].iter().all(|v| v.abs() < 1e-14));
        for k in 0..4 {
            assert!((r[gordon + k] - r[u + k]).abs() < 1e-11);
        }
    }

    let o = run(&["fieldmap", s.to_str().unwrap(), "--max-points", "59", "--out", dir.path().to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(text(&o).contains("60 points"), "{}", text(&o));
}

#[test]
fn plot_reads_both_formats_and_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "rest", REST);
    let d = dir.path().to_str().unwrap();
    assert!(run(&["simulate", s.to_str().unwrap(), "--out", d]).status.success());
    for f in ["rest.csv", "rest.jsonl"] {
        let plots = dir.path().join(format!("plots-{f}"));
        let o = run(&["plot", dir.path().join(f).to_str().unwrap(), "--out", plots.to_str().unwrap()]);
        assert!(o.status.success(), "{}", text(&o));
        let circle = std::fs::read_to_string(plots.join("rest.circle.svg")).unwrap();
        assert!(circle.contains("r₀ = ħ/2mc = 5.000e-1"));
        assert!(plots.join("rest.helix.svg").exists() && plots.join("rest.drift.svg").exists());
    }
    let junk = dir.path().join("junk.csv");
    std::fs::write(&junk, "tau,t\n1,2\n").unwrap();
    let o = run(&["plot", junk.to_str().unwrap(), "--out", d]);
    assert!(!o.status.success());
    assert!(text(&o).contains("malformed input"), "{}", text(&o));
}

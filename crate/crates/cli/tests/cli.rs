use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn matairy(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matairy")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = matairy(dir.path(), &["sweep", "--rep", "n2_single", "--xi", "-3:3:61", "--r", "1", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "xi,r,re,im,err");
    assert_eq!(lines.len(), 62);
    assert!(lines[1].starts_with("-3,1,"));
    assert!(lines[31].starts_with("0,1,"));
    assert!(lines[61].starts_with("3,1,"));
    for l in &lines[1..] {
        let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5);
        assert!(cols.iter().all(|c| c.is_finite()));
    }
}

#[test]
fn grid_flag_covers_both_axes_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = matairy(dir.path(), &["sweep", "--rep", "n2_double", "--grid", "-1:1:3x0.5:1:2"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').take(2).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(rows, ["-1,0.5", "-1,1", "0,0.5", "0,1", "1,0.5", "1,1"]);
}

#[test]
fn calibration_is_written_and_picked_up() {
    let dir = tempfile::tempdir().unwrap();
    let before = matairy(dir.path(), &["eval", "--rep", "n2_single", "--xi", "0", "--r", "1"]);
    let before: Value = serde_json::from_str(&stdout(&before)).unwrap();
    assert_eq!(before["calibrated"], false);
    assert!(before["kappa"].is_null());

    assert!(matairy(dir.path(), &["calibrate"]).status.success());
    assert!(dir.path().join("calibration.json").exists());

    let single: Value =
        serde_json::from_str(&stdout(&matairy(dir.path(), &["eval", "--rep", "n2_single", "--xi", "0.5", "--r", "1.5"]))).unwrap();
    let direct: Value =
        serde_json::from_str(&stdout(&matairy(dir.path(), &["eval", "--rep", "direct", "--xi", "0.5", "--r", "1.5"]))).unwrap();
    assert_eq!(single["calibrated"], true);
    let (a, b) = (single["value"]["re"].as_f64().unwrap(), direct["value"]["re"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-3 * b.abs(), "{a} vs {b}");

    let raw = matairy(dir.path(), &["eval", "--rep", "n2_single", "--xi", "0", "--r", "1", "--uncalibrated"]);
    let raw: Value = serde_json::from_str(&stdout(&raw)).unwrap();
    assert_eq!(raw["value"], before["value"]);
}

#[test]
fn spectrum_argument_reaches_higher_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let o = matairy(dir.path(), &["eval", "--rep", "det", "--spectrum", "1,0.2,-0.5,-1.1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 4);
    assert_eq!(v["method_tag"], "direct");
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["eval", "--rep", "nope", "--xi", "0"],
        vec!["eval", "--rep", "direct"],
        vec!["eval", "--rep", "direct", "--spectrum", "1,0,-1"],
        vec!["eval", "--rep", "n2_green", "--xi", "0", "--r", "0"],
        vec!["eval", "--rep", "direct", "--xi", "40"],
        vec!["sweep", "--rep", "n2_single", "--xi", "1:0:5", "--r", "1"],
        vec!["sweep", "--rep", "n2_single", "--xi", "0:1:0", "--r", "1"],
        vec!["sweep", "--rep", "n2_single", "--xi", "a:b"],
        vec!["sweep", "--rep", "n2_double", "--xi", "0:1:3"],
        vec!["eval", "--rep", "direct", "--xi", "0", "--config", "missing.cfg"],
        vec!["eval", "--rep", "direct", "--xi", "0", "--calibration", "missing.json"],
        vec!["check", "--suite", "everything"],
        vec!["frobnicate"],
    ] {
        let o = matairy(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn numerical_failures_exit_with_one_and_a_json_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tight.cfg"), "abs_tol = 1e-30\nrel_tol = 1e-30\n").unwrap();
    let o = matairy(dir.path(), &["eval", "--rep", "direct", "--xi", "0.5", "--config", "tight.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    let d: Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(d["error"], "non_convergence");
    assert!(d["message"].as_str().unwrap().len() > 5);
}

#[test]
fn config_file_overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("q.cfg"), "# coarser lattice\nnodes_per_dim = 8\n").unwrap();
    let base = stdout(&matairy(dir.path(), &["eval", "--rep", "direct", "--xi", "0.5"]));
    let coarse = stdout(&matairy(dir.path(), &["eval", "--rep", "direct", "--xi", "0.5", "--config", "q.cfg"]));
    let nodes = |s: &str| serde_json::from_str::<Value>(s).unwrap()["nodes_used"].as_u64().unwrap();
    assert!(nodes(&coarse) < nodes(&base));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--rep", "separated", "--grid", "-1:1:4x0.5:1.5:3", "--format", "json", "--seed", "3"];
    let a = matairy(dir.path(), &args);
    let b = matairy(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn check_writes_report_and_reflects_status() {
    let dir = tempfile::tempdir().unwrap();
    let o = matairy(dir.path(), &["check", "--suite", "ode", "--out", "ode.json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&std::fs::read(dir.path().join("ode.json")).unwrap()).unwrap();
    assert_eq!(r["suite"], "ode");
    assert_eq!(r["passed"], true);
    assert!(r["residual_reports"].as_array().unwrap().iter().all(|x| x["passed"] == true));
}

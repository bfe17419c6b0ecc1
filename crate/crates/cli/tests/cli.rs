use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn spinbus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinbus")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, cfg: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, cfg.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn small_grid() -> Value {
    json!({
        "experiment": "gamma_h_grid",
        "chain": { "model": "xy", "n": 8, "h": 0.0, "gamma": 0.0, "init": "ferro_down" },
        "gamma_range": { "start": 0.0, "stop": 0.5, "step": 0.25 },
        "h_range": { "start": 0.0, "stop": 1.0, "step": 0.5 }
    })
}

#[test]
fn grid_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "grid.json", &small_grid());
    let a = spinbus(&["grid", "--config", &cfg]);
    let b = spinbus(&["grid", "--config", &cfg, "--sequential"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "model,N,gamma,delta,h,init,engine,t_star,F,C,u,w,A,peak_metric,wall_time");
    assert_eq!(lines.count(), 9);
}

#[test]
fn json_mirror_carries_config_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "grid.json", &small_grid());
    let out = dir.path().join("grid_out.json");
    let status = spinbus(&["grid", "--config", &cfg, "--format", "json", "--seed", "9", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["config"]["experiment"], "gamma_h_grid");
    assert_eq!(v["config"]["chain"]["n"], 8);
    assert_eq!(v["provenance"]["seed"], 9);
    assert_eq!(v["provenance"]["engine"], "ff");
    assert!(v["provenance"]["wall_time"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    assert!(v["argmax"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn timing_fills_the_wall_time_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "grid.json", &small_grid());
    let out = spinbus(&["grid", "--config", &cfg, "--timing"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().nth(1).unwrap().rsplit(',').next().unwrap();
    assert!(last.parse::<f64>().is_ok(), "{last:?}");
}

#[test]
fn time_series_defaults_run() {
    let out = spinbus(&["time-series"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,F,C,u,w,A\n"));
}

#[test]
fn validation_passes_and_catches_a_flipped_phase() {
    let ok = spinbus(&["validate", "--seed", "3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let bad = spinbus(&["validate", "--seed", "3", "--corrupt-phase"]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(spinbus(&["grid", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));

    let cfg = write_config(dir.path(), "grid.json", &small_grid());
    assert_eq!(spinbus(&["scaling", "--config", &cfg]).status.code(), Some(2));

    let mut bogus = small_grid();
    bogus["colour"] = json!("blue");
    let cfg = write_config(dir.path(), "bogus.json", &bogus);
    assert_eq!(spinbus(&["grid", "--config", &cfg]).status.code(), Some(2));

    let mut xxz = small_grid();
    xxz["chain"] = json!({ "model": "xxz", "n": 6, "delta": 0.5, "init": "neel" });
    let cfg = write_config(dir.path(), "xxz.json", &xxz);
    assert_eq!(spinbus(&["grid", "--config", &cfg, "--engine", "ff"]).status.code(), Some(2));

    assert_eq!(spinbus(&["time-series", "--threads", "0"]).status.code(), Some(2));
}

#[test]
fn exact_engine_beyond_desk_scale_needs_stretch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "experiment": "delta_sweep",
        "chain": { "model": "xxz", "n": 16, "delta": 0.0, "init": "ferro_down" },
        "delta_range": { "start": 0.0, "stop": 0.0, "step": 0.1 }
    });
    let path = write_config(dir.path(), "sweep.json", &cfg);
    assert_eq!(spinbus(&["delta-sweep", "--config", &path]).status.code(), Some(2));
}

use std::process::{Command, Output};

fn uur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uur"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_prints_catalog() {
    let o = uur(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in uur_core::repro::BUILTIN_NAMES {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn run_csv_to_stdout() {
    let o = uur(&["run", "example1-d3", "--grid", "0:pi:5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,variance_product,I2,I3,LB2,detG");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|f| f.parse().unwrap()).collect();
    assert!((last[0] - std::f64::consts::PI).abs() < 1e-14);
}

#[test]
fn run_json_to_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = uur(&[
            "--seed",
            "7",
            "run",
            "example5",
            "--grid",
            "0:1:4",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let points = v.as_array().unwrap();
    assert_eq!(points.len(), 4);
    assert!(points[0].get("prod3hat_k9").is_some());
}

#[test]
fn run_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.json");
    std::fs::write(
        &cfg,
        r#"{
            "name": "qubit-pair",
            "state": {"family": "fixed_pure", "amplitudes": [[0.6, 0.0], [0.0, 0.8]]},
            "operators": [{"op": "pauli_exp", "axis": "x", "angle": 0.3},
                          {"op": "pauli_exp", "axis": "z", "angle": 0.7}],
            "grid": {"start": 0.0, "stop": 1.0, "count": 3},
            "bounds": ["I2", "LB2"]
        }"#,
    )
    .unwrap();
    let o = uur(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(uur(&["run", "example9"]).status.code(), Some(2));
    assert_eq!(
        uur(&["run", "example2", "--grid", "0:1:1"]).status.code(),
        Some(2)
    );
    assert_eq!(uur(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"name": "bad", "state": {"family": "clock_shift", "d": 3},
            "operators": [{"op": "clock", "d": 3}, {"op": "shift", "d": 3}],
            "bounds": ["I4"]}"#,
    )
    .unwrap();
    let o = uur(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bounds"));
}

#[test]
fn check_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = uur(&["check", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("24/24 criteria passed"));

    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(report).unwrap()).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 24);
    for e in entries {
        let obj = e.as_object().unwrap();
        assert_eq!(obj.len(), 4);
        assert!(obj["criterion"].is_string());
        assert!(obj["tolerance"].is_f64());
        assert!(obj["worst_deviation"].is_f64());
        assert_eq!(obj["pass"], serde_json::Value::Bool(true));
    }
}

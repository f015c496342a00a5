//! End-to-end checks of the `dnp` binary: CSV shapes, exit codes,
//! config handling, and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dnp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dnp"))
}

fn run(args: &[&str]) -> Output {
    dnp().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn read_report(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("report written");
    serde_json::from_str(&text).expect("valid JSON report")
}

#[test]
fn steady_dark_dot_prints_single_stable_row() {
    let out = run(&["steady", "--power", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "B_N_tesla,stability,slope_per_s");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].contains(",stable,"));
    let b_n: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    assert!(b_n.abs() < 1e-5);
    assert!(text.ends_with('\n'));
}

#[test]
fn steady_bistable_point_prints_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("steady.json");
    let out = run(&[
        "steady",
        "--power",
        "0.28",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let labels: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(labels, vec!["stable", "unstable", "stable"]);

    let report = read_report(&report_path);
    assert_eq!(report["exit_status"], 0);
    assert_eq!(report["fixed_points"].as_array().unwrap().len(), 3);
    assert_eq!(report["drive"]["helicity"], -1);
}

#[test]
fn missing_config_path_exits_one() {
    let out = run(&["--config", "/nonexistent/x.conf", "steady"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn config_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "# ok\ngamma = -1\n").unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "steady"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("violates invariant gamma > 0"), "stderr: {err}");
}

#[test]
fn sweep_rejects_single_step() {
    let out = run(&[
        "sweep", "--axis", "power", "--from", "0", "--to", "0.6", "--steps", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("steps must be >= 2"), "stderr: {err}");
}

#[test]
fn power_sweep_reports_hysteresis_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("sweep.json");
    let out = run(&[
        "sweep",
        "--axis",
        "power",
        "--from",
        "0",
        "--to",
        "0.6",
        "--steps",
        "31",
        "--direction",
        "both",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "axis_value,B_N_tesla,E_e_ueV,E_X_ueV,threshold_flag,direction"
    );
    assert_eq!(text.lines().count(), 1 + 62);
    assert_eq!(text.matches(",up\n").count(), 31);
    assert_eq!(text.matches(",down\n").count(), 31);
    // Exactly one flagged row per direction at the reference drive.
    assert_eq!(text.matches(",1,up").count(), 1);
    assert_eq!(text.matches(",1,down").count(), 1);

    let report = read_report(&report_path);
    let thresholds = report["thresholds"].as_array().unwrap();
    assert_eq!(thresholds.len(), 2);
    let up = thresholds.iter().find(|t| t["direction"] == "up").unwrap();
    let down = thresholds.iter().find(|t| t["direction"] == "down").unwrap();
    let up_power = up["axis_value"].as_f64().unwrap();
    let down_power = down["axis_value"].as_f64().unwrap();
    assert!((0.25..=0.35).contains(&up_power), "up at {up_power}");
    assert!(down_power < up_power);
    assert!(report["loop_area"].as_f64().unwrap() > 0.0);
}

#[test]
fn bias_scan_thresholds_from_config_drive() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("scan.conf");
    std::fs::write(&conf, "[drive]\nB_z = 2.1\nP = 0.4\nV_app = 0.2\n").unwrap();
    let report_path = dir.path().join("scan.json");
    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "sweep",
        "--axis",
        "bias",
        "--from",
        "0.2",
        "--to",
        "-0.6",
        "--steps",
        "41",
        "--direction",
        "both",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_report(&report_path);
    let thresholds = report["thresholds"].as_array().unwrap();
    let up = thresholds.iter().find(|t| t["direction"] == "up").unwrap();
    let down = thresholds.iter().find(|t| t["direction"] == "down").unwrap();
    let v1 = up["axis_value"].as_f64().unwrap();
    let v2 = down["axis_value"].as_f64().unwrap();
    assert!((-0.50..=-0.40).contains(&v1), "toward-reverse switch at {v1}");
    assert!((-0.15..=-0.05).contains(&v2), "return switch at {v2}");
}

#[test]
fn atlas_sigma_plus_grid_is_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("plus.conf");
    std::fs::write(&conf, "helicity = +1\n").unwrap();
    let report_path = dir.path().join("atlas.json");
    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "atlas",
        "--x",
        "power:0.05:0.6:4",
        "--y",
        "field:1.6:2.4:3",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("y\\x,"));
    assert_eq!(lines.len(), 4);
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 5);
        assert!(cells[1..].iter().all(|&c| c == "1"), "row: {row}");
    }
    let report = read_report(&report_path);
    assert!(report["atlas"]["bistable_bounding_box"].is_null());
    assert_eq!(report["atlas"]["marginal_cells"], 0);
}

#[test]
fn atlas_rejects_degenerate_grid_spec() {
    let out = run(&["atlas", "--x", "power:0:0.6:1", "--y", "field:1.5:3:4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pthr_writes_rows_and_resonance_report() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("pthr.json");
    let out = run(&[
        "pthr",
        "--bias-from",
        "-0.5",
        "--bias-to",
        "-0.4",
        "--bias-steps",
        "3",
        "--pmax",
        "0.6",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "bias_V,P_thr_mW");
    assert_eq!(lines.len(), 4);
    for row in &lines[1..] {
        let p: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.30..=0.36).contains(&p), "row: {row}");
    }
    let report = read_report(&report_path);
    assert_eq!(report["p_thr"].as_array().unwrap().len(), 3);
}

#[test]
fn pthr_cells_empty_when_pump_negligible() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("weak.conf");
    // k_pump must stay positive; one photon-ish per second disables the
    // pump at any milliwatt-scale ceiling.
    std::fs::write(&conf, "k_pump = 1.0\n").unwrap();
    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "pthr",
        "--bias-from",
        "-0.5",
        "--bias-to",
        "-0.4",
        "--bias-steps",
        "2",
        "--pmax",
        "0.6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    for row in text.lines().skip(1) {
        assert!(row.ends_with(','), "expected empty threshold cell: {row}");
    }
}

#[test]
fn pthr_rejects_bad_ranges() {
    let out = run(&[
        "pthr", "--bias-from", "-0.5", "--bias-to", "-0.5", "--bias-steps", "3", "--pmax", "0.6",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_one() {
    let out = run(&["steady", "--frequency", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reference_config_file_matches_builtins() {
    // The shipped reference.conf spells out every default; loading it
    // must not change any output.
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let reference = manifest.join("../../reference.conf");
    let with_file = dnp()
        .args([
            "--config",
            reference.to_str().unwrap(),
            "steady",
            "--power",
            "0.28",
        ])
        .output()
        .unwrap();
    let builtin = run(&["steady", "--power", "0.28"]);
    assert_eq!(with_file.status.code(), Some(0));
    assert_eq!(stdout_str(&with_file), stdout_str(&builtin));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["steady", "--power", "0"],
        vec!["steady", "--power", "0.28"],
        vec![
            "sweep", "--axis", "power", "--from", "0", "--to", "0.6", "--steps", "21",
            "--direction", "both",
        ],
        vec!["atlas", "--x", "power:0.1:0.5:3", "--y", "field:1.8:2.2:2"],
        vec![
            "pthr", "--bias-from", "-0.5", "--bias-to", "-0.44", "--bias-steps", "2", "--pmax",
            "0.6",
        ],
    ];
    for args in &cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "args: {args:?}");
        assert_eq!(a.stdout, b.stdout, "stdout differs for {args:?}");
    }
}

#[test]
fn reports_identical_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("r1.json");
    let p2 = dir.path().join("r2.json");
    for p in [&p1, &p2] {
        let out = run(&["steady", "--power", "0.28", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let mut r1 = read_report(&p1);
    let mut r2 = read_report(&p2);
    r1["timestamp"] = Value::Null;
    r2["timestamp"] = Value::Null;
    assert_eq!(r1, r2);
}

//! End-to-end tests of the `router` binary: exit codes, output formats,
//! and config handling.

use std::path::Path;
use std::process::{Command, Output};

fn router(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_router"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn router")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const BASIC: &str = r#"{
    "h1": 0.5, "h2": 0.5,
    "V1a": 1.0, "V1b": 1.0, "V2a": 1.0, "V2b": 1.0,
    "d": 1.0, "delta_omega": 0.42
}"#;

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = router(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_prints_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = router(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in ["amplitudes", "sweep", "sweep2d", "verify", "fano", "window"] {
        assert!(text.contains(sub), "help text missing `{sub}`");
    }
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", "{ not json");
    let out = router(&["amplitudes", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_config_key_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"V1a": 1.0, "V1x": 2.0}"#);
    let out = router(&["amplitudes", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_coupling_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"V1a": -1.0}"#);
    let out = router(&["amplitudes", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("V1a"), "error should name the offending key: {err}");
}

#[test]
fn amplitudes_prints_point_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", BASIC);
    let out = router(&["amplitudes", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config: {"));
    assert!(lines[1].starts_with("t_a_re,"));
    assert_eq!(lines[2].split(',').count(), 15);
}

#[test]
fn sweep_writes_contracted_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", BASIC);
    let out = router(
        &[
            "sweep", "--config", &cfg, "--axis", "delta_omega", "--from", "-3", "--to", "3",
            "--points", "11", "--out", "spec.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("spec.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# config: {"));
    assert_eq!(lines[1], "delta_omega,T_a,R_a,T_b,R_b,P_a,P_b,L,residual,flag");
    assert_eq!(lines.len(), 13);
    assert!(!csv.contains('\r'));
    assert!(lines[2].starts_with("-3.000000000000,"));
}

#[test]
fn sweep_without_axis_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", BASIC);
    let out = router(&["sweep", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep2d_uses_config_axes_and_emits_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.json",
        r#"{
            "h1": 0.5, "h2": 0.5, "d": 1.0, "delta_omega": 0.42,
            "sweep": {
                "axis1": { "name": "Va", "from": 0.0, "to": 2.0, "points": 5 },
                "axis2": { "name": "Vb", "from": 0.0, "to": 2.0, "points": 4 }
            }
        }"#,
    );
    let out = router(
        &["sweep2d", "--config", &cfg, "--out", "map.csv", "--svg", "map.svg"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("map.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1], "Va,Vb,T_a,R_a,T_b,R_b,P_a,P_b,L,residual,flag");
    assert_eq!(lines.len(), 2 + 5 * 4);
    // Row-major: the second axis varies fastest.
    assert!(lines[2].starts_with("0.000000000000,0.000000000000,"));
    assert!(lines[3].starts_with("0.000000000000,0.666666666667,"));
    let svg = std::fs::read_to_string(dir.path().join("map.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<!-- config:"));
}

#[test]
fn solver_flag_selects_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", BASIC);
    let closed = router(
        &["sweep", "--config", &cfg, "--axis", "delta_omega", "--from", "-1", "--to", "1",
          "--points", "5", "--out", "c.csv"],
        dir.path(),
    );
    let oracle = router(
        &["sweep", "--config", &cfg, "--axis", "delta_omega", "--from", "-1", "--to", "1",
          "--points", "5", "--out", "o.csv", "--solver", "oracle"],
        dir.path(),
    );
    assert_eq!(closed.status.code(), Some(0));
    assert_eq!(oracle.status.code(), Some(0));
    let c = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let o = std::fs::read_to_string(dir.path().join("o.csv")).unwrap();
    // Same physics, different solver tag in the echo.
    assert!(c.contains("closed_corrected"));
    assert!(o.contains("oracle"));
    assert_eq!(
        c.lines().skip(1).collect::<Vec<_>>(),
        o.lines().skip(1).collect::<Vec<_>>(),
        "solvers should agree to printed precision"
    );
}

#[test]
fn verify_passes_with_corrected_and_fails_with_verbatim() {
    let dir = tempfile::tempdir().unwrap();
    let ok = router(&["verify", "--draws", "50", "--seed", "7"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().contains("max_relative_deviation"));

    let bad = router(
        &["verify", "--draws", "50", "--seed", "7", "--solver", "verbatim"],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn verify_deviation_is_seed_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = router(&["verify", "--draws", "20", "--seed", "3"], dir.path());
    let b = router(&["verify", "--draws", "20", "--seed", "3"], dir.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fano_reports_metric() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", BASIC);
    let out = router(
        &["fano", "--config", &cfg, "--axis", "delta_omega", "--from", "-3", "--to", "3",
          "--points", "201"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("fano_asymmetry = "));
}

#[test]
fn fano_rejects_asymmetric_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", BASIC);
    let out = router(
        &["fano", "--config", &cfg, "--axis", "delta_omega", "--from", "-1", "--to", "3",
          "--points", "201"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn window_reports_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.json",
        r#"{"V1a": 1.0, "V1b": 1.0, "d": 0.0, "delta_omega": 0.1, "omega_c2": 1e6}"#,
    );
    let out = router(
        &["window", "--config", &cfg, "--axis", "h", "--from", "0", "--to", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("crossing found"), "{text}");
    let h: f64 = text
        .trim()
        .strip_prefix("h_star = ")
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((h - 1.0).abs() < 0.15, "h_star = {h}");
}

#[test]
fn sweep_svg_for_line_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.json", BASIC);
    let out = router(
        &["sweep", "--config", &cfg, "--axis", "delta_omega", "--from", "-3", "--to", "3",
          "--points", "51", "--out", "s.csv", "--svg", "s.svg"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("s.svg")).unwrap();
    assert!(svg.contains("<path"));
    assert!(svg.contains("P_b"));
}

//! End-to-end tests of the `screwpdm` binary: exit codes, artifact shapes,
//! flag overrides, and the config-embedding round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_screwpdm"))
}

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("screwpdm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn spectrum_case_a_value_and_exit_zero() {
    let cfg = repo_config("case_a.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--chi",
        "0",
        "spectrum",
        "--nr",
        "0",
        "--ell",
        "1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let value = json["result"]["value"].as_f64().unwrap();
    assert!((value - 3.0615528128088303).abs() < 1e-12, "value = {value}");
    // Resolved config echoes the override, not the file value.
    assert_eq!(json["config"]["dislocation"]["chi"].as_f64().unwrap(), 0.0);
    assert_eq!(json["result"]["case"], "case_a");
}

#[test]
fn spectrum_invalid_state_exits_3() {
    let cfg = repo_config("case_d.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--chi",
        "0.2",
        "--k",
        "1",
        "spectrum",
        "--nr",
        "0",
        "--ell",
        "-4",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_config_exits_2() {
    let path = scratch("bad.toml");
    std::fs::write(&path, "[pdm]\nlambda = 1.0\nsigma = -1.0\nbogus_key = 3\n").unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "spectrum", "--nr", "0", "--ell", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let missing = scratch("missing.toml");
    let out =
        run(&["--config", missing.to_str().unwrap(), "spectrum", "--nr", "0", "--ell", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn audit_case_c_reports_printed_deviates() {
    let cfg = repo_config("case_c.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--n-points",
        "4000",
        "audit",
        "--case",
        "c",
        "--nr",
        "0",
        "--ell",
        "1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["report"]["verdict"], "printed_deviates");
    let oracle = json["report"]["oracle_value"].as_f64().unwrap();
    assert!((oracle + 11.0).abs() < 0.02, "oracle = {oracle}");
    assert_eq!(json["report"]["as_printed"].as_f64().unwrap(), -1.0);
}

#[test]
fn verify_case_a_closed_form_against_oracle() {
    let cfg = repo_config("case_a.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--n-points",
        "4000",
        "verify",
        "--nr",
        "0",
        "--ell",
        "1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(json["relative_gap"].as_f64().unwrap() < 1e-3);
    assert!(json["residual_sup_norm"].as_f64().unwrap() < 1e-6);
}

#[test]
fn wavefunction_csv_shape() {
    let cfg = repo_config("case_a.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "wavefunction",
        "--nr",
        "0",
        "--ell",
        "1",
        "--samples",
        "64",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "r,R,U");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 65);
    assert!(text.lines().any(|l| l.starts_with("# [pdm]")));
}

#[test]
fn crossings_locates_documented_point() {
    let cfg = repo_config("case_a.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--chi",
        "0",
        "crossings",
        "--state-a",
        "0,2",
        "--state-b",
        "1,-1",
        "--start",
        "-1",
        "--stop",
        "1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let crossings = json["crossings"].as_array().unwrap();
    assert_eq!(crossings.len(), 1);
    let chi = crossings[0]["axis_value"].as_f64().unwrap();
    assert!((chi + 0.0077524).abs() < 1e-6, "chi* = {chi}");
}

#[test]
fn sweep_artifact_round_trips_bitwise() {
    let cfg = repo_config("case_e.toml");
    let args = ["sweep", "--workers", "2"];
    let first = run(&["--config", cfg.to_str().unwrap(), &args[0], &args[1], &args[2]]);
    assert!(first.status.success(), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let artifact = stdout_str(&first);

    // The embedded comment block is the resolved config; feeding it back
    // with the same command reproduces the artifact byte for byte.
    let embedded: String = artifact
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches("# ").to_string() + "\n")
        .collect();
    let replay_path = scratch("replay.toml");
    std::fs::write(&replay_path, embedded).unwrap();
    let second = run(&["--config", replay_path.to_str().unwrap(), &args[0], &args[1], &args[2]]);
    assert!(second.status.success());
    assert_eq!(artifact, stdout_str(&second));

    // Energies are constant along the b_lin axis.
    let energies: Vec<&str> = artifact
        .lines()
        .filter(|l| !l.starts_with('#') && l.starts_with("b_lin"))
        .map(|l| l.split(',').nth(4).unwrap())
        .collect();
    assert!(!energies.is_empty());
    let per_state_0: Vec<&str> = energies.iter().step_by(2).cloned().collect();
    assert!(per_state_0.iter().all(|&e| e == per_state_0[0]));
}

#[test]
fn sweep_json_and_out_file() {
    let cfg = repo_config("case_a.toml");
    let out_path = scratch("table.json");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "sweep",
        "--axis",
        "chi",
        "--start",
        "-1",
        "--stop",
        "1",
        "--steps",
        "5",
        "--state",
        "0,1",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["table"]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn audit_case_b_target_sign() {
    let cfg = repo_config("case_b.toml");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--n-points",
        "4000",
        "audit",
        "--case",
        "b",
        "--nr",
        "0",
        "--ell",
        "0",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    // Energy value agrees; the deviation lives in the target-sign field.
    assert_eq!(json["report"]["verdict"], "agrees");
    assert_eq!(json["report"]["target_sign"]["verdict"], "printed_deviates");
    assert!(json["report"]["target_sign"]["printed_target_root"].is_null());
    let root = json["report"]["target_sign"]["positive_target_root"].as_f64().unwrap();
    assert!((root + 1.0 / 9.0).abs() < 1e-3);
}

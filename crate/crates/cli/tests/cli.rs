use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn lescat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lescat")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stderr).expect("stderr is JSON")["error"].clone()
}

#[test]
fn well_at_unitarity() {
    let v = json(&lescat(&["compute", "--potential", "well", "--v", "1.2337005501361697", "--mu", "1"]));
    assert!(v["a"].as_str().unwrap().starts_with("unitary"));
    assert!((v["r0"].as_f64().unwrap() - 1.0).abs() < 1e-5);
    assert_eq!(v["nodes"], 0);
    assert_eq!(v["input"]["family"], "spherical-well");
}

#[test]
fn empty_table_gives_zero_length() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zero.json");
    fs::write(&file, r#"{"r": [0, 1, 2, 3], "v": [0, 0, 0, 0]}"#).unwrap();
    let v = json(&lescat(&["compute", "--potential", "tabulated", "--file", file.to_str().unwrap()]));
    assert_eq!(v["a"], 0.0);
    assert!(v["r0"].is_null());
}

#[test]
fn poschl_teller_neutron_neutron() {
    let v = json(&lescat(&["compute", "--potential", "mpt", "--v", "0.9071", "--mu", "0.7991"]));
    assert!((v["a"].as_f64().unwrap() + 18.51).abs() < 0.1);
    assert!((v["r0"].as_f64().unwrap() - 2.70).abs() < 0.02);
}

#[test]
fn lambda_is_an_alternative_strength() {
    let by_v = json(&lescat(&["compute", "--potential", "mpt", "--v", "1", "--mu", "2"]));
    let by_lambda = json(&lescat(&["compute", "--potential", "mpt", "--lambda", "2", "--mu", "2"]));
    assert_eq!(by_v["r0"], by_lambda["r0"]);
    let both = lescat(&["compute", "--potential", "mpt", "--v", "1", "--lambda", "2", "--mu", "2"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let bad_flag = lescat(&["compute", "--nonsense"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert_eq!(error(&bad_flag)["kind"], "config");

    let bad_family = lescat(&["compute", "--potential", "cubic", "--v", "1", "--mu", "1"]);
    assert_eq!(bad_family.status.code(), Some(2));

    let negative = lescat(&["compute", "--potential", "well", "--v", "-1", "--mu", "1"]);
    assert_eq!(negative.status.code(), Some(2));

    let missing = lescat(&["compute", "--potential", "tabulated", "--file", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(4));
    assert_eq!(error(&missing)["exit_code"], 4);

    assert_eq!(lescat(&["--help"]).status.code(), Some(0));
    assert_eq!(lescat(&["--version"]).status.code(), Some(0));
}

#[test]
fn tuning_failures() {
    let no_budget = lescat(&["tune", "--potential", "well", "--a", "-18.5", "--r0", "2.7", "--max-iterations", "0"]);
    assert_eq!(no_budget.status.code(), Some(2));
    let tight = lescat(&[
        "tune", "--potential", "well", "--a", "-18.5", "--r0", "2.7", "--max-iterations", "1", "--tol-a", "1e-12", "--tol-r0", "1e-12",
    ]);
    assert_eq!(tight.status.code(), Some(3));
    assert_eq!(error(&tight)["kind"], "numerical");
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"command": "compute", "potential": "well", "v": 1.0, "mu": 1.0}"#).unwrap();
    let from_file = json(&lescat(&["compute", "--config", cfg.to_str().unwrap()]));
    assert_eq!(from_file["input"]["v"], 1.0);
    let overridden = json(&lescat(&["compute", "--config", cfg.to_str().unwrap(), "--v", "1.2"]));
    assert_eq!(overridden["input"]["v"], 1.2);

    fs::write(&cfg, r#"{"potential": "well", "depth": 1.0}"#).unwrap();
    assert_eq!(lescat(&["compute", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&cfg, r#"{"command": "scan", "potential": "well"}"#).unwrap();
    assert_eq!(lescat(&["compute", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("c.json");
    let path = saved.to_str().unwrap();
    let out = lescat(&["compute", "--potential", "gaussian", "--v", "1.2121", "--mu", "0.5672", "--out", path]);
    assert!(out.status.success());
    let check = lescat(&["table", "3", "--verify", path, "--format", "json"]);
    let rows = json(&check);
    assert_eq!(rows.as_array().unwrap().len(), 1);

    let mut doctored: Value = serde_json::from_str(&fs::read_to_string(&saved).unwrap()).unwrap();
    doctored["a"] = (-10.0).into();
    fs::write(&saved, doctored.to_string()).unwrap();
    assert_eq!(lescat(&["table", "3", "--verify", path]).status.code(), Some(3));
}

fn csv_rows(out: &Output) -> Vec<Vec<f64>> {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn free_wavefunction_is_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("free.json");
    fs::write(&file, r#"{"r": [0, 1, 2], "v": [0, 0, 0]}"#).unwrap();
    let rows = csv_rows(&lescat(&["wavefunction", "--potential", "tabulated", "--file", file.to_str().unwrap(), "--stride", "1000"]));
    assert_eq!(rows.len(), 21);
    for r in &rows {
        assert!((r[1] - r[0] * rows[1][1] / rows[1][0]).abs() < 1e-9);
    }
}

#[test]
fn poschl_teller_wavefunction_is_tanh() {
    let rows = csv_rows(&lescat(&["wavefunction", "--potential", "mpt", "--v", "1", "--mu", "2", "--stride", "500"]));
    let last = rows.last().unwrap();
    for r in &rows {
        let want = (2.0 * r[0]).tanh() / (2.0 * last[0]).tanh();
        assert!((r[1] - want).abs() < 1e-8, "r = {}", r[0]);
    }
}

#[test]
fn wavefunction_continues_outside() {
    let rows = csv_rows(&lescat(&["wavefunction", "--potential", "well", "--v", "0.5", "--mu", "1", "--stride", "1000", "--r-max", "3"]));
    let a = json(&lescat(&["compute", "--potential", "well", "--v", "0.5", "--mu", "1"]))["a"].as_f64().unwrap();
    assert!((rows.last().unwrap()[0] - 3.0).abs() < 1e-9);
    for r in rows.iter().filter(|r| r[0] >= 1.0) {
        assert!((r[1] - (1.0 - r[0] / a)).abs() < 1e-8);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["scan", "--potential", "gaussian", "--vary", "v", "--fixed", "1", "--from", "0.5", "--to", "3", "--steps", "11"];
    let first = lescat(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, lescat(&args).stdout);
}

#[test]
fn scan_flags_the_threshold() {
    let out = lescat(&["scan", "--potential", "well", "--vary", "strength", "--fixed", "1", "--values", "1.1,1.2,1.3", "--format", "json"]);
    let rows = json(&out);
    let flags: Vec<bool> = rows.as_array().unwrap().iter().map(|r| r["divergence"].as_bool().unwrap()).collect();
    assert_eq!(flags, [false, true, true]);
}

#[test]
fn phase_shifts_follow_the_expansion() {
    let rows = json(&lescat(&["phaseshift", "--potential", "well", "--v", "1", "--mu", "1", "--k-from", "0.001", "--k-to", "0.01", "--k-steps", "4"]));
    for r in rows.as_array().unwrap() {
        let (kcot, expansion) = (r["kcot"].as_f64().unwrap(), r["kcot_expansion"].as_f64().unwrap());
        assert!((kcot - expansion).abs() < 1e-6);
    }
}

#[test]
fn bound_presets() {
    let d = json(&lescat(&["bound", "--preset", "deuteron"]));
    assert!((d["e_zr"].as_f64().unwrap() + 1.416).abs() < 2e-3);
    assert!((d["e_fr"].as_f64().unwrap() + 2.223).abs() < 2e-3);
    let he = json(&lescat(&["bound", "--preset", "he4-dimer"]));
    assert_eq!(he["energy_unit"], "mK");
    let manual = json(&lescat(&["bound", "--a", "5.4112", "--r0", "1.7436", "--units", "fm", "--mass", "np"]));
    assert_eq!(manual["e_fr"], d["e_fr"]);
}

#[test]
fn tables_pass() {
    for n in ["1", "3", "4"] {
        let out = lescat(&["table", n]);
        assert!(out.status.success(), "table {n}: {}", String::from_utf8_lossy(&out.stdout));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(!text.contains("FAIL"));
    }
    assert_eq!(lescat(&["table", "2"]).status.code(), Some(2));
}

#[test]
fn tune_reaches_target() {
    let v = json(&lescat(&["tune", "--potential", "gaussian", "--a", "5.4", "--r0", "1.7", "--nodes", "1", "--trace"]));
    assert_eq!(v["converged"], true);
    assert!((v["achieved"]["a"].as_f64().unwrap() - 5.4).abs() < 5.4e-3);
    assert!(!v["history"].as_array().unwrap().is_empty());
    let unitary = json(&lescat(&["tune", "--potential", "mpt", "--a", "unitary", "--r0", "1"]));
    assert!(unitary["achieved"]["a"].is_string() || unitary["achieved"]["a"].as_f64().unwrap().abs() > 1e3);
}

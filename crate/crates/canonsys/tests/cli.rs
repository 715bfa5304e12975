use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_canonsys"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

const DIAG_EXP: &str = r#"{"interval": [0, "inf"], "kind": "family", "family": "diag-exp"}"#;
const UNIT: &str = r#"{"interval": [0, 3.141592653589793], "kind": "family", "family": "constant", "params": [1, 1, 0]}"#;
const ALPHA3: &str = r#"{"interval": [0, 1], "kind": "family", "family": "power-log", "params": {"alpha": 3}}"#;

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.json", DIAG_EXP);
    let o = run(dir.path(), &["validate", ok.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["valid"], true);

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"interval": [0, "inf"], "kind": "table", "breakpoints": [0, 1, "inf"],
            "cells": [[1, 1, 0], [[1, 2], [2, 1]]]}"#,
    );
    let o = run(dir.path(), &["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["valid"], false);
    assert_eq!(v["checks"][0]["name"], "psd");
    assert_eq!(v["checks"][0]["passed"], false);

    let broken = write(dir.path(), "broken.json", "{\"interval\": [0, ");
    assert_eq!(code(&run(dir.path(), &["validate", broken.to_str().unwrap()])), 2);
    let unknown = write(dir.path(), "unknown.json", r#"{"interval": [0, 1], "kind": "family", "family": "nope"}"#);
    assert_eq!(code(&run(dir.path(), &["validate", unknown.to_str().unwrap()])), 2);
}

#[test]
fn analyze_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let de = write(dir.path(), "de.json", DIAG_EXP);
    let o = run(dir.path(), &["analyze", de.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["verdict"], "holds");
        assert_eq!(r["agreement"], true);
        assert!(r["trajectory"].as_array().unwrap().len() >= 6);
    }

    let a3 = write(dir.path(), "a3.json", ALPHA3);
    let o = run(dir.path(), &["analyze", a3.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["reports"][0]["verdict"], "fails");

    // a comparison function of order ≤ 1 is outside the engines' scope
    let o = run(dir.path(), &["analyze", de.to_str().unwrap(), "--growth", "rho=1"]);
    assert_eq!(code(&o), 3);
    let o = run(dir.path(), &["analyze", de.to_str().unwrap(), "--growth", "rho=oops"]);
    assert_eq!(code(&o), 2);

    let o = run(dir.path(), &["analyze", de.to_str().unwrap(), "--growth", "rho=2", "--lambda", "2"]);
    let v = stdout_json(&o);
    assert_eq!(v["reports"].as_array().unwrap().len(), 4);
    assert_eq!(v["reports"][2]["criterion"], "summability");
    assert_eq!(v["kac"]["membership"], "in A_K+");
}

#[test]
fn spectrum_of_the_unit_hamiltonian() {
    let dir = tempfile::tempdir().unwrap();
    let unit = write(dir.path(), "unit.json", UNIT);
    let o = run(dir.path(), &["spectrum", unit.to_str().unwrap(), "--window", "20"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let mut eig: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(eig.len(), 40);
    eig.sort_by(f64::total_cmp);
    for (i, l) in eig.iter().enumerate() {
        let exact = i as f64 - 19.5;
        assert!((l - exact).abs() < 1e-8, "{l} vs {exact}");
    }
    assert!(v["exponent"]["slope"].as_f64().unwrap() > 0.9);

    let o = run(dir.path(), &["spectrum", unit.to_str().unwrap(), "--window", "2", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("index,lambda,sign\n"));
    assert_eq!(text.lines().count(), 5);

    assert_eq!(code(&run(dir.path(), &["spectrum", "missing.json"])), 2);
    assert_eq!(code(&run(dir.path(), &["spectrum", unit.to_str().unwrap(), "--c", "7"])), 2);
}

#[test]
fn operator_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let de = write(dir.path(), "de.json", DIAG_EXP);
    let dump = dir.path().join("k.bin");
    let o = run(dir.path(), &["operator", de.to_str().unwrap(), "--grid", "64", "--dump", dump.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let sigma: Vec<f64> = v["sigma"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(sigma.len(), 128);
    // diagonal Hamiltonians give every singular value twice
    for pair in sigma.chunks(2) {
        assert_eq!(pair[0], pair[1]);
    }
    assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    let m = canonsys::export::read_matrix_dump(std::fs::File::open(&dump).unwrap()).unwrap();
    assert_eq!(m.rows(), 128);

    let r1 = write(dir.path(), "r1.json", r#"{"interval": [0, 1], "kind": "family", "family": "rank-one-power-log", "params": {"alpha1": 1}}"#);
    let o = run(dir.path(), &["compare-independence", r1.to_str().unwrap(), "--grid", "256", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,sigma_full,sigma_diag\n"));
    assert_eq!(text.lines().count(), 1 + 512);
}

#[test]
fn out_directory_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let unit = write(dir.path(), "unit.json", UNIT);
    let out = dir.path().join("results");
    let o = run(dir.path(), &["spectrum", unit.to_str().unwrap(), "--window", "20", "--out", out.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let spectrum = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    let counting = std::fs::read_to_string(out.join("counting.csv")).unwrap();
    assert_eq!(spectrum.lines().count(), 41);
    assert!(counting.starts_with("r,n_of_r\n"));
    let de = write(dir.path(), "de.json", DIAG_EXP);
    run(dir.path(), &["dyadic", de.to_str().unwrap(), "--depth", "8", "--out", out.to_str().unwrap(), "--format", "csv"]);
    let profile = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    assert!(profile.starts_with("n,c_n,omega_n\n0,0.0,0.0\n1,0.69314718"));
    assert_eq!(profile.lines().count(), 10);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let de = write(dir.path(), "de.json", DIAG_EXP);
    let unit = write(dir.path(), "unit.json", UNIT);
    let commands: [&[&str]; 4] = [
        &["analyze", de.to_str().unwrap(), "--growth", "rho=2"],
        &["dyadic", de.to_str().unwrap()],
        &["spectrum", unit.to_str().unwrap(), "--window", "30"],
        &["operator", de.to_str().unwrap(), "--grid", "64"],
    ];
    for args in commands {
        let (a, b) = (run(dir.path(), args), run(dir.path(), args));
        assert_eq!(code(&a), code(&b));
        assert!(a.stdout == b.stdout, "{args:?} differs between runs");
    }
}

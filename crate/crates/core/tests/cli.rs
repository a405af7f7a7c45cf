use std::process::{Command, Output};

use serde_json::Value;

fn cfunc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfunc")).args(args).env_remove("CFUNC_SEED").output().expect("runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn jacobi_exact_shape() {
    let out = cfunc(&["jacobi", "--p", "7", "--j1", "3", "--j2", "2", "--exact"]);
    assert!(out.status.success());
    let v = json(&out);
    let z = v["complex"].as_array().unwrap();
    assert!((z[0].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((z[1].as_f64().unwrap().abs() - 3f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["cycint"]["m"], 6);
    let plain = json(&cfunc(&["jacobi", "--p", "7", "--j1", "3", "--j2", "2"]));
    assert!(plain.get("cycint").is_none());
}

#[test]
fn solve_seven_totals_six() {
    let out = cfunc(&["solve", "--d", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    let total: u64 = v["solutions"].as_array().unwrap().iter().map(|s| s["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 6);
    let csv = cfunc(&["solve", "--d", "7", "--method", "total-degree", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3);
    assert!(text.starts_with("index,multiplicity"));
}

#[test]
fn orbit_scan_six_is_clean() {
    let out = cfunc(&["orbit-scan", "--d", "6"]);
    assert!(out.status.success());
    let v = json(&out);
    let ex = v["exceptional"].as_array().unwrap();
    assert!(v["mismatches"].as_array().unwrap().is_empty());
    let pairs = |label: &str| -> Vec<(u64, u64)> {
        ex.iter()
            .filter(|e| e["exceptional_case"]["label"] == label)
            .map(|e| (e["j"].as_u64().unwrap(), e["k"].as_u64().unwrap()))
            .collect()
    };
    assert_eq!(pairs("b"), vec![(2, 1), (2, 5), (4, 1), (4, 5)]);
    assert!(pairs("a").iter().all(|&(j, _)| j == 3));
    assert_eq!(pairs("a").len() + pairs("b").len(), ex.len());
}

#[test]
fn checks_exit_zero_on_success() {
    assert!(cfunc(&["stickelberger", "--p", "13", "--j", "2", "--k", "5"]).status.success());
    assert!(cfunc(&["transversality", "--p", "7"]).status.success());
    assert!(cfunc(&["chebotarev", "--p", "11", "--rows", "1,2,5", "--cols", "0,3,4"]).status.success());
    assert!(cfunc(&["uncertainty", "--p", "7", "--fiber"]).status.success());
    assert!(cfunc(&["classify-ratio", "--p", "13", "--j1", "2", "--j2", "1"]).status.success());
}

#[test]
fn usage_and_library_errors_exit_two() {
    assert_eq!(cfunc(&["solve", "--d", "7", "--bogus"]).status.code(), Some(2));
    assert_eq!(cfunc(&["solve", "--d", "7", "--method", "newton"]).status.code(), Some(2));
    assert_eq!(cfunc(&["solve", "--d", "9"]).status.code(), Some(2));
    assert_eq!(cfunc(&["jacobi", "--p", "8", "--j1", "1", "--j2", "1"]).status.code(), Some(2));
    assert_eq!(cfunc(&["uncertainty", "--p", "7", "--support", "9"]).status.code(), Some(2));
    assert_eq!(cfunc(&["verify", "--only", "11"]).status.code(), Some(2));
}

#[test]
fn seed_flag_and_env_agree() {
    let a = cfunc(&["biunimodular", "--p", "7", "--trials", "200", "--seed", "9"]);
    let b = Command::new(env!("CARGO_BIN_EXE_cfunc"))
        .args(["biunimodular", "--p", "7", "--trials", "200"])
        .env("CFUNC_SEED", "9")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 9);
}

#[test]
fn verify_prints_one_line_per_criterion() {
    let out = cfunc(&["verify", "--level", "fast", "--only", "3,7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("criterion")).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.contains("PASS")));
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistcalc")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn verify(lhs: &str, rhs: &str) -> Output {
    let (l, r) = (fixture(lhs), fixture(rhs));
    run(&["verify", "--lhs", l.to_str().unwrap(), "--rhs", r.to_str().unwrap(), "--genus", "2"])
}

#[test]
fn verify_exit_codes() {
    assert_eq!(verify("braid_lhs.tw", "braid_rhs.tw").status.code(), Some(0));
    let refuted = verify("noncommuting_lhs.tw", "noncommuting_rhs.tw");
    assert_eq!(refuted.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&refuted.stdout).starts_with("refuted"));
    assert_eq!(verify("opaque_lhs.tw", "braid_rhs.tw").status.code(), Some(4));
}

#[test]
fn verify_json_verdict() {
    let (l, r) = (fixture("noncommuting_lhs.tw"), fixture("noncommuting_rhs.tw"));
    let out = run(&["verify", "--lhs", l.to_str().unwrap(), "--rhs", r.to_str().unwrap(), "--genus", "2", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "refuted");
    assert!(v["schema"].as_str().unwrap().starts_with("twistcalc/"));
}

#[test]
fn table_signature_column() {
    let v = run_json(&["table", "--g", "2", "--h", "1", "--n", "0", "--m-max", "3", "--json"]);
    let sigma: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|r| r["signature"].as_i64().unwrap()).collect();
    assert_eq!(sigma, vec![0, -6, -12, -18]);
    let text = run(&["table", "--g", "2", "--h", "1", "--n", "0", "--m-max", "3"]);
    let stdout = String::from_utf8(text.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 5);
    assert!(stdout.lines().nth(2).unwrap().split_whitespace().eq(["1", "10", "10", "-6", "2", "13"]));
}

#[test]
fn family_report() {
    let v = run_json(&["family", "--g", "2", "--h", "2", "--n", "0", "--m", "1", "--json"]);
    assert_eq!(v["invariants"]["M"], 100);
    assert_eq!(v["invariants"]["euler"], 104);
    assert_eq!(v["invariants"]["signature"], -60);
    assert_eq!(v["factorization"]["boundary_twist_power"], 0);
    let negative = run_json(&["family", "--g", "2", "--h", "1", "--n", "-2", "--m", "0", "--json"]);
    assert_eq!(negative["factorization"]["section_self_intersection"], -2);
}

#[test]
fn tap_on_fixture_book() {
    let (b, s) = (fixture("book.json"), fixture("spec.json"));
    let v = run_json(&["tap", "--book", b.to_str().unwrap(), "--spec", s.to_str().unwrap()]);
    assert_eq!(v["account"]["one_handles"], 1);
    assert_eq!(v["account"]["two_handles"], 8);
    assert_eq!(v["book"]["paper"].as_array().unwrap().len(), 1);
    assert_eq!(v["book"]["paper"][0]["monodromy"], "t_c1 t_c2 ?*h^-1 t_b^2 ?*h");
    assert_eq!(v["fold"]["kind"], "unmerge");
}

#[test]
fn plumbing_output() {
    let v = run_json(&["plumbing", "--g", "2", "--h", "1", "--n", "-3"]);
    assert_eq!(v["first_homology"]["free_rank"], 6);
    assert_eq!(v["first_homology"]["torsion"], serde_json::json!([]));
    let v = run_json(&["plumbing", "--g", "2", "--h", "1", "--n", "0", "--k", "2", "--framings", "-1,-2"]);
    assert_eq!(v["linking_matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic() {
    let args = ["family", "--g", "3", "--h", "2", "--n", "-1", "--m", "2", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (bk, s) = (fixture("book.json"), fixture("spec.json"));
    let tap = ["tap", "--book", bk.to_str().unwrap(), "--spec", s.to_str().unwrap()];
    assert_eq!(run(&tap).stdout, run(&tap).stdout);
}

#[test]
fn error_exit_codes() {
    // n above 2h - 2 is a domain error
    assert_eq!(run(&["family", "--g", "2", "--h", "1", "--n", "1", "--m", "1"]).status.code(), Some(1));
    assert_eq!(run(&["family", "--g", "2", "--h", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let missing = fixture("no_such_file.tw");
    let r = fixture("braid_rhs.tw");
    let out = run(&["verify", "--lhs", missing.to_str().unwrap(), "--rhs", r.to_str().unwrap(), "--genus", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--lhs", r.to_str().unwrap(), "--rhs", r.to_str().unwrap(), "--genus", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

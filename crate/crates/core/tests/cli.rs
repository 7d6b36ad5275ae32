use std::process::{Command, Output};

use serde_json::Value;

fn levelh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levelh")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(levelh(&["level2", "--h", "1,5,11,21,36,21,11,5,2"]).status.code(), Some(0));
    assert_eq!(levelh(&["level2", "--h", "1,3,6,10,9,7,5,2"]).status.code(), Some(1));
    assert_eq!(levelh(&["oseq", "--h", "1,2,4"]).status.code(), Some(1));
    assert_eq!(levelh(&["oseq", "--h", "1,x"]).status.code(), Some(65));
    assert_eq!(levelh(&["bogus"]).status.code(), Some(64));
    assert_eq!(levelh(&["--version"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let args = ["--seed", "7", "witness", "--r", "3", "--a", "4", "--e", "7"];
    let (a, b) = (levelh(&args), levelh(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_has_the_documented_keys() {
    let v = json(&levelh(&["level2", "--h", "1,3,6,10,9,7,5,2"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["artifacts", "inputs", "subcommand", "trace", "verdict"]);
    assert_eq!(v["verdict"], "not-level");
    assert_eq!(v["artifacts"]["stage"], "three-part-screen");
}

#[test]
fn witness_file_round_trips_through_hvector() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = levelh(&["level2", "--h", "1,3,4,5,4,3,2", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let file = dir.path().join("witness.txt");
    let back = json(&levelh(&["hvector", "--module", file.to_str().unwrap()]));
    assert_eq!(back["artifacts"]["hvector"], serde_json::json!([1, 3, 4, 5, 4, 3, 2]));
    let socle = json(&levelh(&["socle", "--module", file.to_str().unwrap()]));
    assert_eq!(socle["artifacts"]["socle"], serde_json::json!([0, 0, 0, 0, 0, 0, 2]));
}

#[test]
fn table_format_prints_key_value_lines() {
    let o = levelh(&["--format", "table", "oseq", "--h", "1,3,6,10,9,7,5,2"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l == "verdict: yes"));
    assert!(text.lines().any(|l| l == "h: 1,3,6,10,9,7,5,2"));
}

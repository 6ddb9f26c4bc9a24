use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subsum-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout));
    });
    (v, out.status.code().unwrap())
}

/// Every run of digits in order.
fn numbers(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()).map(str::to_string).collect()
}

#[test]
fn subsums_example() {
    let (v, code) = json_of(&["subsums", "-g", "8", "-s", "0^2;4^2;1^2;5^2", "-n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "subsum-lab/1");
    assert_eq!(v["result"]["sums"], serde_json::json!([0, 1, 2, 4, 5, 6]));
    assert_eq!(v["result"]["size"], 6);
    assert_eq!(v["result"]["stabilizer"], serde_json::json!([0, 4]));
    assert_eq!(v["verified"], true);
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let cases: [&[&str]; 4] = [
        &["subsums", "-g", "8", "-s", "0^2;4^2;1^2;5^2", "-n", "2"],
        &["group", "info", "2x4"],
        &["maincert", "-g", "4", "-s", "0^6;2^6", "--sprime", "0^5;2^5", "-n", "5"],
        &["sumset", "-g", "3x3", "(0,0);(1,0);(0,1)", "-n", "3"],
    ];
    for args in cases {
        let text = String::from_utf8(run(args).stdout).unwrap();
        let (mut v, _) = json_of(args);
        let obj = v.as_object_mut().unwrap();
        obj.remove("schema");
        obj.remove("timing_ms");
        let text: String = text.lines().filter(|l| !l.starts_with("timing_ms")).collect::<Vec<_>>().join("\n");
        assert_eq!(numbers(&text), numbers(&v.to_string()), "{args:?}");
    }
}

#[test]
fn group_info_example() {
    let (v, code) = json_of(&["group", "info", "2x4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["order"], 8);
    assert_eq!(v["result"]["exponent"], 4);
    assert_eq!(v["result"]["d_star"], 4);
    let (v, _) = json_of(&["group", "info", "-g", "4x2"]);
    assert_eq!(v["group"]["invariant_factors"], serde_json::json!([2, 4]));
}

#[test]
fn maincert_report_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let out = run(&[
        "maincert", "-g", "4", "-s", "0^6;2^6", "--sprime", "0^5;2^5", "-n", "5", "--format", "json", "--out", p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["case"], "ii");
    assert_eq!(v["result"]["K"], serde_json::json!([0, 2]));
    assert_eq!(v["result"]["H"], serde_json::json!([0, 2]));
    assert_eq!(v["verified"], true);

    let (r, code) = json_of(&["verify", p]);
    assert_eq!(code, 0);
    assert_eq!(r["verified"], v["verified"]);
    assert_eq!(r["violations"], v["violations"]);

    // moving alpha off the coset breaks the prefix clause
    let mut bad = v.clone();
    bad["result"]["alpha"] = serde_json::json!(1);
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, bad.to_string()).unwrap();
    let (r, code) = json_of(&["verify", bad_path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["verified"], false);
    assert!(!r["violations"].as_array().unwrap().is_empty());
}

#[test]
fn partition_report_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let p = path.to_str().unwrap();
    let out = run(&["partition", "-g", "2x4", "-s", "(0,0)^3;(1,1)^2;(0,2);(1,3)", "-n", "3", "--format", "json", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["theorem"], "partition");
    let (r, code) = json_of(&["verify", p]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["holds"], true);
}

#[test]
fn unmet_hypotheses_exit_one() {
    let (v, code) = json_of(&["maincert", "-g", "8", "-s", "0^2;4^2;1^2;5^2", "-n", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["hypotheses_met"], false);
    assert_eq!(v["verified"], false);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["subsums", "-g", "8", "-s", "0^2;x", "-n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["subsums", "-g", "0", "-s", "0", "-n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["subsums", "-g", "8", "-s", "0;1", "-n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["maincert", "-g", "4", "-s", "0^2", "-n", "2", "--mode", "weird"]).status.code(), Some(2));
    // full-group mode needs |S'| >= n + |G| - 1
    assert_eq!(run(&["maincert", "-g", "8", "-s", "0;1;2", "-n", "2", "--mode", "fullgroup"]).status.code(), Some(2));
}

#[test]
fn example_families() {
    let (v, code) = json_of(&["example", "a", "-g", "8", "--subgroup", "0;4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["seq_len"], 8);
    assert_eq!(v["result"]["sums_size"], 6);
    let (v, code) = json_of(&["example", "b", "-g", "2x3x3", "--subgroup", "(1,0,0);(0,0,0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["seq_len"], 16);
    assert_eq!(v["result"]["sums_size"], 14);
    let (v, code) = json_of(&["example", "c", "-g", "3x3x3", "--subgroup", "(0,0,0);(1,0,0);(2,0,0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["seq_len"], 27);
    assert_eq!(v["result"]["sums_size"], 24);
    assert_eq!(run(&["example", "a", "-g", "8", "--subgroup", "0;2;4;6"]).status.code(), Some(2));
}

#[test]
fn small_audit_is_clean_and_deterministic() {
    let args = ["audit", "--max-order", "6", "--len-cap", "3", "--samples", "50", "--seed", "3"];
    let (a, code) = json_of(&args);
    assert_eq!(code, 0);
    assert_eq!(a["verified"], true);
    let mut four = args.to_vec();
    four.extend(["--jobs", "4"]);
    let (b, _) = json_of(&four);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(run(&["audit", "--checkers", "subsum_kneser,bogus"]).status.code(), Some(2));
}

#[test]
fn hunt_and_davenport() {
    let (v, code) = json_of(&["hunt", "-g", "2", "-n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["outcome"], "no hit");
    assert_eq!(v["result"]["exhaustive"], true);
    let (v, code) = json_of(&["davenport", "-g", "2x2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["value"], 3);
    assert_eq!(run(&["davenport", "-g", "32"]).status.code(), Some(2));
}

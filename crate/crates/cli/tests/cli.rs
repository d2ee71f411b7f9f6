use std::process::{Command, Output};

use serde_json::Value;
use wordchar::algebra::{Polynomial, RationalFunction};

fn wordchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordchar")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn expected_char_example() {
    let out = wordchar(&["expected-char", "--word", "aBAb", "--lambda", "1", "--eval", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("= 1 / (n - 1)"), "{text}");
    assert!(text.contains("n = 4: 1/3"), "{text}");
}

#[test]
fn json_is_sorted_stable_and_round_trips() {
    let args = ["expected-char", "--word", "abAB", "--lambda", "2", "--eval", "5", "--json"];
    let first = wordchar(&args);
    let second = wordchar(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let f: RationalFunction = serde_json::from_value(v["rational"].clone()).unwrap();
    // 1 / dim of (n-2, 2) = 2 / (n (n - 3))
    let expected = RationalFunction::new(Polynomial::from_ints(&[2]), Polynomial::from_ints(&[0, -3, 1])).unwrap();
    assert_eq!(f, expected);
    assert_eq!(v["evals"][0]["value"], "1/5");
    assert_eq!(v["k"], 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wordchar(&["expected-char", "--word", "aA(", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(wordchar(&["expected-char", "--word", "ab", "--lambda", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(wordchar(&["expected-char", "--word", "ab", "--lambda", "1,2"]).status.code(), Some(2));
    assert_eq!(wordchar(&["frobnicate"]).status.code(), Some(2));
    // evaluation below the validity range
    assert_eq!(wordchar(&["expected-char", "--word", "abAB", "--lambda", "2", "--eval", "3"]).status.code(), Some(2));
    let out = wordchar(&["mc", "--word", "ab", "--lambda", "1", "--n", "5", "--samples", "10", "--seed", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_env_caps_enumeration() {
    let out = Command::new(env!("CARGO_BIN_EXE_wordchar"))
        .args(["expected-char", "--word", "abAB", "--lambda", "2"])
        .env("WORDCHAR_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn weingarten_example() {
    let out = wordchar(&["weingarten", "--m", "2", "--sigma", "{{1,2}}", "--tau", "{{1,2}}", "--eval", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("= 1 / (n - 1)"), "{text}");
    assert!(text.contains("n = 5: 1/4"), "{text}");
    let out = wordchar(&["weingarten", "--m", "3", "--sigma", "{{1,2}}", "--tau", "{{1,2}}"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracles_agree_with_engine() {
    let exact = stdout(&wordchar(&["exhaustive", "--word", "aabb", "--lambda", "1", "--n", "4"]));
    let engine = wordchar(&["expected-char", "--word", "aabb", "--lambda", "1", "--eval", "4", "--json"]);
    let v: Value = serde_json::from_slice(&engine.stdout).unwrap();
    assert_eq!(exact.trim(), v["evals"][0]["value"].as_str().unwrap());
    let mc = wordchar(&["mc", "--word", "abAB", "--lambda", "1", "--n", "20", "--samples", "5000", "--seed", "9", "--json"]);
    let v: Value = serde_json::from_slice(&mc.stdout).unwrap();
    assert!((v["mean"].as_f64().unwrap() - 1.0 / 19.0).abs() <= 4.0 * v["stderr"].as_f64().unwrap());
}

#[test]
fn poly_form_and_phi() {
    let out = wordchar(&["poly-form", "--word", "abAB", "--lambda", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["q"], 4);
    assert_eq!(v["degree_bound"], 29);
    let out = wordchar(&["phi", "--word", "abAB", "--K", "2", "--terms", "4", "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["taylor"], serde_json::json!(["0/1", "0/1", "0/1", "0/1"]));
}

#[test]
fn projection_check_passes() {
    let out = wordchar(&["projection-check", "--lambda", "2", "--n", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));
}

#[test]
fn spectral_gap_csv_columns() {
    let dir = std::env::temp_dir().join(format!("wordchar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gap.csv");
    let out = wordchar(&["spectral-gap", "--n", "20", "--k", "2", "--r", "2", "--seeds", "1,2,3", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_to_string(&path).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("seed,n,k,r,lambda_nontrivial,bound,iterations,connected"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1,20,2,2,"));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    // same seeds, same bytes
    let again = wordchar(&["spectral-gap", "--n", "20", "--k", "2", "--r", "2", "--seeds", "1,2,3", "--format", "csv"]);
    assert_eq!(stdout(&again), table);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn regress_subset_and_failure_exit() {
    let out = wordchar(&["regress", "--criteria", "2,3,7", "--threads", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
    // an unknown criterion is reported as a failure
    assert_eq!(wordchar(&["regress", "--criteria", "11"]).status.code(), Some(1));
}

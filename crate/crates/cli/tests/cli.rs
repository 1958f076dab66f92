use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn hamburn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamburn"))
        .args(args)
        .env_remove("HAMBURN_CAP")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn input_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn bounds_reports() {
    let v = json(&hamburn(&[
        "bounds",
        "--n",
        "6",
        "--q",
        "3",
        "--exact-limit",
        "10",
    ]));
    assert_eq!(
        (v["lower"].as_u64(), v["upper"].as_u64()),
        (Some(5), Some(6))
    );
    assert!(v.get("exact").is_none());

    let v = json(&hamburn(&["bounds", "--n", "3", "--q", "3"]));
    assert_eq!(v["exact"], 4);
    assert_eq!(v["lower"], 3);
    assert_eq!(v["upper"], 4);

    let v = json(&hamburn(&["bounds", "--n", "5", "--q", "2"]));
    assert_eq!(v["upper"], 4);
    assert_eq!(v["exact"], 4);
    assert!(v["lower"].is_null());
}

#[test]
fn evade_from_file() {
    let f = input_file("[[1,1,1],[2,2,2]]");
    let out = hamburn(&[
        "evade",
        "--n",
        "3",
        "--q",
        "3",
        "--input",
        f.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["required"], serde_json::json!([2, 1]));
    assert_eq!(v["holds"], true);
}

#[test]
fn evade_with_empty_list_is_vacuous() {
    let f = input_file("[]");
    let out = hamburn(&[
        "evade",
        "--n",
        "3",
        "--q",
        "3",
        "--input",
        f.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["required"], serde_json::json!([]));
}

#[test]
fn evade_rejects_bad_input() {
    let f = input_file("[[1,4,1]]");
    let out = hamburn(&[
        "evade",
        "--n",
        "3",
        "--q",
        "3",
        "--input",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let f = input_file("[[1,1,1]");
    let out = hamburn(&[
        "evade",
        "--n",
        "3",
        "--q",
        "3",
        "--input",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let f = input_file("[[1,1,1]]");
    let out = hamburn(&[
        "evade",
        "--n",
        "3",
        "--q",
        "2",
        "--input",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evade_trials_report() {
    let v = json(&hamburn(&[
        "evade", "--n", "8", "--q", "4", "--trials", "25",
    ]));
    assert_eq!(v["passes"], 25);
    assert_eq!(v["failures"], 0);
}

#[test]
fn verify_sequence_reports_uncovered_vertex() {
    let f = input_file("[[1,1,1],[2,2,2]]");
    let v = json(&hamburn(&[
        "verify-sequence",
        "--q",
        "2",
        "--input",
        f.path().to_str().unwrap(),
    ]));
    assert_eq!(v["burns"], false);
    assert_eq!(v["uncovered"], serde_json::json!([1, 2, 2]));

    let f = input_file("[[1,1,1],[2,2,2],[1,2,1]]");
    let v = json(&hamburn(&[
        "verify-sequence",
        "--q",
        "2",
        "--input",
        f.path().to_str().unwrap(),
    ]));
    assert_eq!(v["burns"], true);
}

#[test]
fn burn_number_and_capacity() {
    let v = json(&hamburn(&["burn-number", "--n", "4", "--q", "2"]));
    assert_eq!(v["value"], 3);
    assert_eq!(v["witness_burns"], true);
    assert_eq!(v["shorter_exists"], false);

    let out = hamburn(&["burn-number", "--n", "4", "--q", "3", "--cap", "50"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_hamburn"))
        .args(["burn-number", "--n", "4", "--q", "3"])
        .env("HAMBURN_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn openproblem_capacity_and_rationals() {
    let out = hamburn(&["openproblem", "--k", "2", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hamburn(&["openproblem", "--k", "1", "--mode", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evade_trace_uses_fraction_strings() {
    let f = input_file("[[1,2,3,1,2,3],[3,3,3,3,3,3]]");
    let v = json(&hamburn(&[
        "evade",
        "--n",
        "6",
        "--q",
        "3",
        "--input",
        f.path().to_str().unwrap(),
    ]));
    let lambda = v["trace"][0]["lambda"].as_str().unwrap();
    let (p, q) = lambda.split_once('/').unwrap();
    assert!(p.parse::<i64>().is_ok() && q.parse::<u64>().unwrap() > 0);
}

#[test]
fn selfcheck_passes_and_detects_faults() {
    let out = hamburn(&["selfcheck"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);

    let out = hamburn(&["selfcheck", "--inject-fault", "color-vector"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let suites = v["suites"].as_array().unwrap();
    let table = suites
        .iter()
        .find(|s| s["name"] == "inner-product-table")
        .unwrap();
    assert_eq!(table["passed"], false);
}

#[test]
fn bs_check_finds_witnesses() {
    let out = hamburn(&["bs-check", "--n", "12", "--trials", "30", "--seed", "5"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["witnesses_found"], 30);
}

#[test]
fn table_format_and_output_file() {
    let out = hamburn(&["bounds", "--n", "3", "--q", "3", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("exact") && l.ends_with('4')));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = hamburn(&[
        "bounds",
        "--n",
        "2",
        "--q",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["exact"], 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hamburn(&["bounds", "--n", "3"]).status.code(), Some(2));
    assert_eq!(hamburn(&["frobnicate"]).status.code(), Some(2));
}

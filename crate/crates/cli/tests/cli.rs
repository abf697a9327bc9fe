use std::process::Command;

use finpart_cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("finpart").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut with_format = args.to_vec();
    with_format.extend(["--format", "json"]);
    let (code, out, err) = invoke(&with_format);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).expect("one JSON document")
}

#[test]
fn d_prints_the_count() {
    let (code, out, _) = invoke(&["d", "17", "1,2,2,3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "18");
}

#[test]
fn multiset_order_does_not_matter() {
    let (_, a, _) = invoke(&["d", "17", "3,2,1,2"]);
    assert_eq!(a.trim(), "18");
    assert_eq!(json(&["d", "17", "3,2,1,2"])["A"], "1,2,2,3");
}

#[test]
fn delta_list_prints_solutions() {
    let (code, out, _) = invoke(&["delta", "18", "1,2,2,3", "--list"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["3", "(3,2,4,1)", "(4,1,3,2)", "(5,2,3,1)"]);
    let v = json(&["delta", "18", "1,2,2,3", "--list"]);
    assert_eq!(v["count"], "3");
    assert_eq!(v["solutions"].as_array().unwrap().len(), 3);
}

#[test]
fn shifted_counts_and_lists() {
    let (_, out, _) = invoke(&["d0", "17", "1,2,2,3"]);
    assert_eq!(out.trim(), "72");
    let (_, out, _) = invoke(&["delta0", "10", "1,2,2,3", "--list"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "3");
    assert!(lines[1..].contains(&"(2,1,3,0)"));
    let (_, out, _) = invoke(&["d0", "0", "1,2,2,3", "--list"]);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["1", "(0,0,0,0)"]);
}

#[test]
fn pi_and_multisets() {
    let (_, out, _) = invoke(&["pi", "7", "3"]);
    assert_eq!(out.trim(), "4");
    let (_, out, _) = invoke(&["multisets", "6", "2"]);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["{1,1}", "{1,2}", "{1,3}", "{1,4}", "{2,2}"]);
    assert_eq!(json(&["multisets", "6", "3"])["multisets"], serde_json::json!(["1,1,1"]));
}

#[test]
fn circles_terms_json() {
    let v = json(&["circles", "6", "--terms"]);
    assert_eq!(v["count"], "48");
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 11);
    let sum: u64 = terms
        .iter()
        .map(|t| t["term"].as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(sum, 48);
    assert_eq!(terms[0], serde_json::json!({"A": "1", "x": [6], "term": "20"}));
}

#[test]
fn large_counts_are_exact_decimal_strings() {
    let (_, out, _) = invoke(&["circles", "60"]);
    let text = out.trim();
    assert!(text.chars().all(|c| c.is_ascii_digit()));
    assert!(text.len() > 20);
    assert_eq!(json(&["circles", "60"])["count"], text);
}

#[test]
fn text_and_json_agree() {
    for args in [
        vec!["pi", "20", "4"],
        vec!["d", "40", "1,1,2,3"],
        vec!["d0", "12", "2,3"],
        vec!["delta", "30", "1,2,2"],
        vec!["delta0", "9", "1,1,2"],
        vec!["circles", "15"],
    ] {
        let (_, text, _) = invoke(&args);
        assert_eq!(json(&args)["count"], text.trim(), "{args:?}");
    }
}

#[test]
fn forest_parse_and_enum() {
    let (code, out, _) = invoke(&["forest", "parse", "()(())"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "(())()");
    let v = json(&["forest", "parse", "((~))(~)"]);
    assert_eq!(v["size"], 3);
    let (_, out, _) = invoke(&["forest", "enum", "4"]);
    assert_eq!(out.lines().count(), 9);
}

#[test]
fn forest_errors_are_domain_errors() {
    let (code, _, err) = invoke(&["forest", "parse", "(()"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("byte 3"), "{err}");
    let (code, _, err) = invoke(&["forest", "parse", "(a)"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("byte 1"), "{err}");
    let (code, _, err) = invoke(&["forest", "enum", "12"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn closed_evaluation() {
    let (_, out, _) = invoke(&["closed", "D_12", "17"]);
    assert_eq!(out.trim(), "8");
    let v = json(&["closed", "D_122", "14"]);
    assert_eq!(v["closed"], "9");
    assert_eq!(v["agrees"], true);
    let v = json(&["closed", "D_pair_distinct", "5", "--a1", "2", "--a2", "3"]);
    assert_eq!((v["closed"].as_str(), v["recursion"].as_str()), (Some("0"), Some("1")));
    let v = json(&["closed", "DELTA_12", "9"]);
    assert_eq!(v["closed"], "3");
    let (code, _, _) = invoke(&["closed", "D_pair_equal", "5"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn closed_validate_reports() {
    let v = json(&["closed", "validate", "D_12", "--max", "500"]);
    assert_eq!(v["formula"], "D_12");
    assert_eq!(v["range"], serde_json::json!([1, 500]));
    assert!(v["mismatches"].as_array().unwrap().is_empty());
    let v = json(&["closed", "validate", "D_pair_distinct", "--max", "100"]);
    let witness = serde_json::json!({"n": 5, "multiset": "2,3", "closed": "0", "recursion": "1"});
    assert!(v["mismatches"].as_array().unwrap().contains(&witness));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["d", "17", "1,0"],
        vec!["d", "17", "1,x"],
        vec!["d", "-3", "1"],
        vec!["d", "--", "-3", "1"],
        vec!["pi", "7"],
        vec!["closed", "D_999", "3"],
        vec!["verify"],
        vec!["d", "17", "1", "--format", "yaml"],
    ] {
        let (code, out, err) = invoke(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_finpart");
    let ok = Command::new(bin).args(["d", "17", "1,2,2,3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "18");
    let usage = Command::new(bin).args(["d", "17"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let domain = Command::new(bin).args(["forest", "parse", ")"]).output().unwrap();
    assert_eq!(domain.status.code(), Some(1));
}

#[test]
fn verify_exit_status_tracks_checks() {
    let (code, out, _) = invoke(&[
        "verify", "--all", "--max-sigma", "5", "--max-n", "20", "--max-forest", "6", "--max-circles", "20",
        "--format", "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 10);
    let all = checks.iter().all(|c| c["passed"] == true);
    assert_eq!(v["passed"], all);
    assert_eq!(code, if all { EXIT_OK } else { EXIT_DOMAIN });
}

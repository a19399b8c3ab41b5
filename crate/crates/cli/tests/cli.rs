use std::process::Command;

use eulerlp_cli::output::Format;
use eulerlp_cli::verify::{Check, Status, SuiteId, Summary, VerifyReport, Witness};
use serde_json::{json, Value};

fn eulerlp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eulerlp")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_of(args: &[&str]) -> Value {
    let (code, stdout, stderr) = eulerlp(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

/// Integer value of a p-adic JSON object, from its digits and valuation.
fn padic_value(v: &Value) -> u64 {
    let p = v["p"].as_u64().unwrap();
    let val = v["valuation"].as_u64().unwrap_or(0) as u32;
    let unit = v["digits"].as_array().unwrap().iter().rev().fold(0, |acc, d| acc * p + d.as_u64().unwrap());
    unit * p.pow(val)
}

#[test]
fn euler_numbers() {
    assert_eq!(eulerlp(&["euler", "--n", "7"]), (0, "{\"n\":7,\"value\":\"17/8\"}\n".into(), String::new()));
    assert_eq!(eulerlp(&["euler", "--n", "4"]).1, "{\"n\":4,\"value\":\"0\"}\n");
    assert_eq!(eulerlp(&["euler", "--n", "11", "--format", "table"]).1, "n      11\nvalue  691/4\n");
    assert_eq!(json_of(&["euler", "--n", "2", "--poly"])["polynomial"], "x^2 - x");
}

#[test]
fn l_value_at_one() {
    let out = json_of(&["lp-eval", "--p", "5", "--precision", "6", "--char", "quad:3", "--s", "1"]);
    assert_eq!(padic_value(&out["value"]), 5u64.pow(6) - 4);
    assert_eq!(out["route"], "series");
    assert_eq!(out["inputs"]["character"], "quad:3");
}

#[test]
fn integrals_with_trace() {
    let out = json_of(&["ferint", "--p", "5", "--precision", "6", "--integrand", "x^7", "--route", "partial-sums"]);
    // 8 · value ≡ 17 mod 5^6
    assert_eq!(padic_value(&out["value"]) * 8 % 15_625, 17);
    let trace = out["trace"].as_array().unwrap();
    assert!(trace.len() >= 3);
    assert!(trace.last().unwrap()["level"].as_u64().unwrap() <= 10);
    let exact = json_of(&["ferint", "--p", "5", "--precision", "6", "--integrand", "x^7"]);
    assert_eq!(exact["value"], out["value"]);
    assert_eq!(exact["route"], "exact");
    let twisted = json_of(&["ferint", "--p", "5", "--integrand", "chi(x)*x^0", "--char", "quad:3"]);
    assert_eq!(padic_value(&twisted["value"]), 15_625 - 2);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(eulerlp(&[]).0, 2);
    assert_eq!(eulerlp(&["frobnicate"]).0, 2);
    assert_eq!(eulerlp(&["verify", "--suite", "not-a-suite"]).0, 2);
    assert_eq!(eulerlp(&["euler"]).0, 2);
    assert_eq!(eulerlp(&["lp-eval", "--char", "quad", "--s", "1"]).0, 2);
    assert_eq!(eulerlp(&["ferint", "--integrand", "y^2"]).0, 2);
    // domain
    assert_eq!(eulerlp(&["lp-eval", "--p", "2", "--char", "quad:3", "--s", "1"]).0, 3);
    assert_eq!(eulerlp(&["lp-eval", "--p", "9", "--char", "quad:3", "--s", "1"]).0, 3);
    assert_eq!(eulerlp(&["lp-eval", "--p", "5", "--char", "7:1", "--s", "1"]).0, 3);
    assert_eq!(eulerlp(&["lp-eval", "--p", "5", "--char", "quad:3", "--s", "1/5"]).0, 3);
    assert_eq!(eulerlp(&["gen-euler", "--char", "quad:3", "--n", "2", "--big-n", "6"]).0, 3);
    assert_eq!(eulerlp(&["ferint", "--integrand", "x^-1"]).0, 3);
    assert_eq!(eulerlp(&["verify", "--p", "4", "--all"]).0, 3);
    // non-convergence
    let (code, stdout, stderr) = eulerlp(&["ferint", "--integrand", "x^3", "--route", "partial-sums", "--max-level", "2"]);
    assert_eq!((code, stdout.as_str()), (4, ""));
    assert!(stderr.contains("no stabilization"));
    // help is not an error
    assert_eq!(eulerlp(&["--help"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["verify", "--suite", "E-0-pro", "--suite", "lemma-11.3.7"],
        vec!["ferint", "--p", "7", "--precision", "4", "--integrand", "3*x^2 - x + 1/2", "--route", "partial-sums"],
        vec!["chi-euler", "--char", "quad:3", "--k", "-2", "--format", "table"],
    ] {
        assert_eq!(eulerlp(&args), eulerlp(&args), "{args:?}");
    }
}

#[test]
fn verify_suites() {
    let report = json_of(&["verify", "--suite", "E-0-pro", "--p", "5"]);
    assert_eq!(report["summary"]["fail"], 0);
    assert!(report["summary"]["pass"].as_u64().unwrap() > 10);
    let report = json_of(&["verify", "--suite", "lemma-11.3.7"]);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    let report = json_of(&["verify", "--suite", "11.3.9", "--p", "5", "--precision", "6"]);
    assert_eq!(report["summary"]["fail"], 0);
    let interp: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("L(χ, 1-k)"))
        .collect();
    assert!(!interp.is_empty());
    assert!(interp.iter().all(|c| c["params"]["modulus_exponent"].as_i64().unwrap() >= 5));
}

#[test]
fn a_failure_exits_one_with_both_sides() {
    let report = VerifyReport {
        p: 5,
        precision: 6,
        suites: vec![SuiteId::ParityZeros],
        checks: vec![Check {
            suite: SuiteId::ParityZeros,
            name: "synthetic".into(),
            params: json!({}),
            status: Status::Fail,
            witness: Some(Witness { lhs: json!("-2"), rhs: json!("0") }),
            note: None,
            elapsed_ms: None,
        }],
        summary: Summary { pass: 0, fail: 1, skipped: 0 },
    };
    assert!(!report.passed());
    let out = eulerlp_cli::finish(&serde_json::to_value(&report).unwrap(), report.passed(), Format::Json);
    assert_eq!(out.code, 1);
    let back: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(back["checks"][0]["witness"], json!({"lhs": "-2", "rhs": "0"}));
}

#[test]
fn in_process_matches_binary() {
    let args = ["eulerlp", "gen-euler", "--char", "5:1", "--n", "3"];
    let inproc = eulerlp_cli::run(args);
    let (code, stdout, _) = eulerlp(&args[1..]);
    assert_eq!((inproc.code, inproc.stdout), (code, stdout));
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pvk(args: &[&str], max_cap: Option<&str>) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pvk"));
    cmd.args(args).current_dir(Path::new(env!("CARGO_MANIFEST_DIR"))).env_remove("PVK_MAX_CAP");
    if let Some(v) = max_cap {
        cmd.env("PVK_MAX_CAP", v);
    }
    let Output { status, stdout, .. } = cmd.output().expect("binary runs");
    let report = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    (status.code().expect("exit code"), report)
}

#[test]
fn success_is_zero() {
    let (code, report) = pvk(&["check-mc", "examples/sl2_adjoint.json"], None);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "ok");
    assert_eq!(report["result"]["residual_zero"], true);
}

#[test]
fn obstruction_is_two() {
    let (code, report) = pvk(&["normalize", "examples/abelian_obstructed.json", "--force"], None);
    assert_eq!(code, 2);
    assert_eq!(report["status"], "obstruction");
    assert_eq!(report["error"]["degree"], 1);
}

#[test]
fn semisimplicity_gate_is_a_validation_failure() {
    let (code, report) = pvk(&["normalize", "examples/abelian_obstructed.json"], None);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "not_semisimple");
}

#[test]
fn load_errors_carry_pointers() {
    let (code, report) = pvk(&["check-mc", "tests/fixtures/rank_mismatch.json"], None);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "cross_ref_error");
    assert_eq!(report["error"]["pointer"], "/bundle/xi");

    let (code, report) = pvk(&["check-mc", "tests/fixtures/bad_rational.json"], None);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "parse_error");
    assert_eq!(report["error"]["pointer"], "/bundle/representation/matrices/0/0/0");

    let (code, report) = pvk(&["check-mc", "tests/fixtures/malformed.json"], None);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "parse_error");

    let (code, report) = pvk(&["ce", "tests/fixtures/not_a_representation.json"], None);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "invalid");

    let (code, report) = pvk(&["check-mc", "tests/fixtures/does_not_exist.json"], None);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "io_error");
}

#[test]
fn non_flat_data_is_rejected() {
    let (code, report) = pvk(&["check-mc", "tests/fixtures/not_flat.json"], None);
    assert_eq!(code, 1);
    assert_eq!(report["status"], "not_flat");
    let (code, _) = pvk(&["normalize", "tests/fixtures/not_flat.json", "--force"], None);
    assert_eq!(code, 1);
}

#[test]
fn cap_limit_from_environment() {
    let (code, report) = pvk(&["normalize", "examples/sl2_adjoint.json", "--cap", "9"], None);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "cap_exceeded");
    let (code, _) = pvk(&["normalize", "examples/sl2_adjoint.json", "--cap", "3"], Some("2"));
    assert_eq!(code, 1);
    let (code, _) = pvk(&["normalize", "examples/sl2_adjoint.json", "--cap", "3"], Some("3"));
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_are_validation_failures() {
    assert_eq!(pvk(&["frobnicate"], None).0, 1);
    assert_eq!(pvk(&["check-mc"], None).0, 1);
    assert_eq!(pvk(&["char-class", "examples/sl2_adjoint.json", "--cocycle", "nope"], None).0, 1);
    assert_eq!(pvk(&["--help"], None).0, 0);
}

#[test]
fn timing_only_on_request() {
    let (_, plain) = pvk(&["ce", "--algebra", "sl2"], None);
    assert!(plain.get("timing").is_none());
    let (_, timed) = pvk(&["ce", "--algebra", "sl2", "--timing"], None);
    assert!(timed["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn report_keys_are_sorted() {
    let out = Command::new(env!("CARGO_BIN_EXE_pvk"))
        .args(["modular", "--algebra", "aff1"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let top: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim()).collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn reports_are_deterministic() {
    let a = pvk(&["normalize", "examples/sl2_standard_sheared.json", "--cap", "4"], None);
    let b = pvk(&["normalize", "examples/sl2_standard_sheared.json", "--cap", "4"], None);
    assert_eq!(a, b);
}

//! End-to-end tests against the compiled binary: exit codes, canonical
//! output, and verification cross-checks.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_valfield"))
}

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], file: &str) -> Output {
    let f = write_temp(file);
    let mut full: Vec<&str> = args.to_vec();
    let path = f.path().to_str().unwrap().to_string();
    full.push(&path);
    bin().args(&full).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lp_infeasible_example() {
    // val(2x + 1/2) >= 0 and val(4x + 1) >= 0 conflict with val(x) >= 0
    let input = r#"{
        "field": {"kind": "p-adic", "p": 2},
        "A": {"rows": 2, "cols": 1, "entries": [["1"], ["1/4"]]},
        "b": ["0", "1/8"],
        "c": ["1"],
        "sense": "min"
    }"#;
    let out = run(&["lp"], input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["type"], "INFEAS");
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn lp_feasible_with_verify() {
    let input = r#"{
        "field": {"kind": "p-adic", "p": 2},
        "A": {"rows": 1, "cols": 1, "entries": [["2"]]},
        "b": ["1"],
        "c": ["1"],
        "sense": "min"
    }"#;
    let out = run(&["lp", "--verify"], input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["type"], "FEAS");
    assert_eq!(v["value"], -1);
    assert_eq!(v["oracle"]["match"], true);
}

#[test]
fn psd_worked_example() {
    let input = r#"{
        "field": {"kind": "p-adic", "p": 5},
        "M": {"rows": 2, "cols": 2, "entries": [["28/5", "4/5"], ["4/5", "-3/5"]]}
    }"#;
    let out = run(&["psd"], input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["psd"], true);
    assert_eq!(v["charpoly"], serde_json::json!(["-4", "-5", "1"]));
}

#[test]
fn snf_verify_small() {
    let input = r#"{
        "field": {"kind": "p-adic", "p": 3},
        "M": {"rows": 2, "cols": 3, "entries": [["1", "3", "9"], ["1/3", "1", "0"]]}
    }"#;
    let out = run(&["snf", "--verify"], input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["oracle"]["match"], true);
    assert_eq!(v["oracle"]["method"], "minors");
    assert_eq!(v["exponents"], v["oracle"]["exponents"]);
}

#[test]
fn malformed_input_exits_2() {
    let out = run(&["psd"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn missing_file_exits_2() {
    let out = bin().args(["lp", "/nonexistent/problem.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_annulus_bounds_exit_2() {
    let input = r#"{"field": {"kind": "p-adic", "p": 2}, "a": 3, "b": 1}"#;
    let out = run(&["sdr", "annulus"], input);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn annulus_sdr_with_verify() {
    let input = r#"{"field": {"kind": "p-adic", "p": 3}, "a": 1, "b": 2}"#;
    let out = run(&["sdr", "annulus", "--verify"], input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["d"], 4);
    assert_eq!(v["height"], 1);
    assert_eq!(v["oracle"]["match"], true);
}

#[test]
fn poly_project_member_empty() {
    // unit disc in K^2
    let poly = r#""P": {"n": 2,
        "A": {"rows": 2, "cols": 2, "entries": [["1", "0"], ["0", "1"]]},
        "v": ["0", "0"]}"#;
    let field = r#""field": {"kind": "p-adic", "p": 2}"#;
    let out = run(&["poly", "project", "--verify"], &format!("{{{field}, {poly}}}"));
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["n"], 1);
    assert_eq!(v["oracle"]["match"], true);

    let out = run(
        &["poly", "member"],
        &format!("{{{field}, {poly}, \"x\": [\"1\", \"2\"]}}"),
    );
    assert_eq!(stdout_json(&out)["member"], true);
    let out = run(
        &["poly", "member"],
        &format!("{{{field}, {poly}, \"x\": [\"1/2\", \"0\"]}}"),
    );
    assert_eq!(stdout_json(&out)["member"], false);

    let out = run(&["poly", "empty"], &format!("{{{field}, {poly}}}"));
    let v = stdout_json(&out);
    assert_eq!(v["empty"], false);
    assert!(v["witness"].is_array());
}

#[test]
fn poly_minkowski_and_ball_form() {
    let field = r#""field": {"kind": "p-adic", "p": 3}"#;
    // B(0,1) + B(1,2) = B(1,1)
    let input = format!(
        r#"{{{field},
        "P": {{"n": 1, "A": {{"rows": 1, "cols": 1, "entries": [["1/3"]]}}, "v": ["0"]}},
        "Q": {{"n": 1, "A": {{"rows": 1, "cols": 1, "entries": [["1/9"]]}}, "v": ["-1/9"]}}}}"#
    );
    let out = run(&["poly", "minkowski", "--verify"], &input);
    assert!(out.status.success());
    let sum = stdout_json(&out);
    assert_eq!(sum["oracle"]["match"], true);

    let ball_input = format!(r#"{{{field}, "P": {}}}"#, sum);
    let out = run(&["poly", "ball-form", "--verify"], &ball_input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["type"], "BALL");
    assert_eq!(v["center"], "1");
    assert_eq!(v["radius"], 1);
    assert_eq!(v["oracle"]["match"], true);
}

#[test]
fn poly_polydisc_shape() {
    let field = r#""field": {"kind": "p-adic", "p": 2}"#;
    let input = format!(
        r#"{{{field}, "P": {{"n": 2,
            "A": {{"rows": 1, "cols": 2, "entries": [["1", "1"]]}}, "v": ["1"]}}}}"#
    );
    let out = run(&["poly", "polydisc"], &input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["base"].is_array());
    assert!(v["map"].is_object());
    assert!(v["disc"].is_array());
}

#[test]
fn spectra_member_and_describe() {
    let field = r#""field": {"kind": "p-adic", "p": 5}"#;
    // F(x) = diag(1, x): PSD iff val(x) >= 0
    let pencil = r#""pencil": {"A": [
        {"rows": 2, "cols": 2, "entries": [["1", "0"], ["0", "0"]]},
        {"rows": 2, "cols": 2, "entries": [["0", "0"], ["0", "1"]]}
    ]}"#;
    let out = run(
        &["spectra", "member", "--verify"],
        &format!("{{{field}, {pencil}, \"x\": [\"5\"]}}"),
    );
    let v = stdout_json(&out);
    assert_eq!(v["member"], true);
    assert_eq!(v["oracle"]["match"], true);
    let out = run(
        &["spectra", "member"],
        &format!("{{{field}, {pencil}, \"x\": [\"1/5\"]}}"),
    );
    assert_eq!(stdout_json(&out)["member"], false);

    let out = run(&["spectra", "describe"], &format!("{{{field}, {pencil}}}"));
    let v = stdout_json(&out);
    assert_eq!(v["polynomials"].as_array().unwrap().len(), 2);
}

#[test]
fn field_override_and_stdin() {
    // no "field" in the file; --field supplies it, input from stdin
    let mut child = bin()
        .args(["psd", "-", "--field", r#"{"kind":"p-adic","p":5}"#])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"M": {"rows": 1, "cols": 1, "entries": [["5"]]}}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["psd"], true);
}

#[test]
fn output_file_flag() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("result.json");
    let input = r#"{"field": {"kind": "p-adic", "p": 2},
        "M": {"rows": 1, "cols": 1, "entries": [["2"]]}}"#;
    let f = write_temp(input);
    let out = bin()
        .args(["psd", f.path().to_str().unwrap(), "-o", dest.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&dest).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["psd"], true);
}

#[test]
fn byte_identical_reruns() {
    let input = r#"{"field": {"kind": "laurent", "var": "t"},
        "M": {"rows": 2, "cols": 2, "entries": [["t", "1"], ["0", "(1)/(t)"]]}}"#;
    let a = run(&["snf"], input);
    let b = run(&["snf"], input);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn laurent_lp_round_trip() {
    let input = r#"{
        "field": {"kind": "laurent", "var": "t"},
        "A": {"rows": 1, "cols": 1, "entries": [["t"]]},
        "b": ["0"],
        "c": ["1"],
        "sense": "min"
    }"#;
    let out = run(&["lp", "--verify"], input);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["type"], "FEAS");
    assert_eq!(v["value"], -1);
    assert_eq!(v["oracle"]["match"], true);
}

//! End-to-end tests of the hecke-zeros binary: JSON/CSV/text output shapes,
//! the exit-code contract, file output, spec loading, and determinism
//! across thread counts.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hecke-zeros"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn golden_polynomial_as_json_and_csv() {
    let out = run(&["hecke-poly", "--form", "R", "--n", "2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["coeffs"], serde_json::json!(["0", "-1728", "1"]));
    assert_eq!(v["zero_at_0"], true);
    assert_eq!(v["zero_at_1728"], true);

    let csv = run(&["hecke-poly", "--form", "R", "--n", "2", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,index,coefficient"));
    assert_eq!(lines.next(), Some("2,0,0"));
    assert_eq!(lines.next(), Some("2,1,-1728"));
    assert_eq!(lines.next(), Some("2,2,1"));
}

#[test]
fn spec_file_reproduces_the_builtin_alias() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    std::fs::write(
        &path,
        r#"{"k":12,"m":1,"principal":["1"],"constant":"-65520/691",
            "eigenvalues":{"kind":"builtin-dim1","k":12}}"#,
    )
    .unwrap();
    let from_file = run(&["hecke-poly", "--form", path.to_str().unwrap(), "--n", "3"]);
    let builtin = run(&["hecke-poly", "--form", "R", "--n", "3"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, builtin.stdout);
}

#[test]
fn usage_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"k": 11}"#).unwrap();
    let bad_spec = run(&["hecke-poly", "--form", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(bad_spec.status.code(), Some(2));
    assert!(!bad_spec.stderr.is_empty());

    let no_n = run(&["hecke-poly", "--form", "R"]);
    assert_eq!(no_n.status.code(), Some(2));

    let no_builtin = run(&["divisor-poly", "--k", "6"]);
    assert_eq!(no_builtin.status.code(), Some(2));
}

#[test]
fn faber_defaults_to_text() {
    let zero = run(&["faber", "--n", "0"]);
    assert!(zero.status.success());
    assert_eq!(String::from_utf8(zero.stdout).unwrap().trim(), "1");

    let one = run(&["faber", "--n", "1"]);
    assert!(one.status.success());
    assert_eq!(String::from_utf8(one.stdout).unwrap().trim(), "x - 744");
}

#[test]
fn eisenstein_file_feeds_divisor_poly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e4.json");
    let write = run(&[
        "eisenstein",
        "--k",
        "4",
        "--precision",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(write.status.success());
    let series: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(series["valuation"], 0);
    assert_eq!(series["coeffs"][0], "1");
    assert_eq!(series["coeffs"][1], "240");

    // E_4 vanishes once at the corner j = 0 and nowhere else.
    let div = run(&["divisor-poly", "--k", "4", "--series", path.to_str().unwrap()]);
    assert!(div.status.success());
    assert_eq!(String::from_utf8(div.stdout).unwrap().trim(), "x");

    // Delta has no zeros in the upper half-plane at all.
    let delta = run(&["divisor-poly", "--k", "12"]);
    assert!(delta.status.success());
    assert_eq!(String::from_utf8(delta.stdout).unwrap().trim(), "1");
}

#[test]
fn eisenstein_csv_includes_the_final_coefficient() {
    let out = run(&["eisenstein", "--k", "4", "--precision", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec!["exponent,coefficient", "0,1", "1,240", "2,2160", "3,6720"]
    );
}

#[test]
fn verify_below_the_contract_threshold() {
    let out = run(&["verify", "--form", "R", "--n", "2", "--grid", "24"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["contracted"], false);
    assert_eq!(v["passed"], true);
    assert_eq!(v["roots"]["count_in_interval"], 2);
    assert_eq!(v["roots"]["all_simple"], true);
    assert_eq!(v["sign_changes"]["expected"], v["sign_changes"]["found"]);
}

#[test]
fn verify_at_the_contract_threshold() {
    let out = run(&["verify", "--form", "R", "--n", "11", "--grid", "24"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["contracted"], true);
    assert_eq!(v["passed"], true);
    assert_eq!(v["roots"]["count_in_interval"], 11);
    assert_eq!(v["sign_changes"]["expected"], 9);
    assert_eq!(v["sign_changes"]["found"], 9);
    let gap = v["max_gap"].as_f64().unwrap();
    assert!(gap > 0.0 && gap < 2.0);
}

#[test]
fn thread_count_does_not_change_output() {
    let mut single = bin();
    single.args(["hecke-poly", "--form", "R", "--n-range", "2..5"]);
    single.env("HECKE_ZEROS_THREADS", "1");
    let single = single.output().expect("binary runs");

    let mut quad = bin();
    quad.args(["hecke-poly", "--form", "R", "--n-range", "2..5"]);
    quad.env("HECKE_ZEROS_THREADS", "4");
    let quad = quad.output().expect("binary runs");

    assert!(single.status.success());
    assert_eq!(single.stdout, quad.stdout);
    let v = stdout_json(&single);
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 4);
    for (item, n) in items.iter().zip(2..) {
        assert_eq!(item["n"], n);
        assert_eq!(item["degree"], n);
    }
}

#[test]
fn mock_delta_matches_the_reference_decimal() {
    let out = run(&["mock-delta", "--n", "1", "--cmax", "500"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let value = v["value"].as_f64().unwrap();
    assert!((value - (-73562460235.684)).abs() < 0.5);
    assert!(v["abs_err"].as_f64().unwrap() < 0.1);
}

#[test]
fn poincare_weight_twelve_values() {
    let out = run(&["poincare", "--k", "12", "--l", "1", "--n", "1", "--cmax", "500"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let cplus = v["cplus"]["value"].as_f64().unwrap();
    let constant = v["constant"]["value"].as_f64().unwrap();
    assert!((cplus - (-1842.8947269)).abs() < 1e-3);
    assert!((constant - (-65520.0 / 691.0)).abs() < 1e-6);
}

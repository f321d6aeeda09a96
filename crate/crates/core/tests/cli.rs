//! End-to-end tests of the gwidth binary: exit codes, report schema, and
//! byte determinism of the JSON output.

use std::process::{Command, Output};

use serde_json::Value;

fn gwidth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwidth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn json_report(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = gwidth(&full);
    let value: Value = serde_json::from_str(stdout(&out).trim())
        .unwrap_or_else(|e| panic!("stdout is one JSON document: {e}\n{}", stdout(&out)));
    (value, out.status.code().expect("exit code"))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn width_reports_unit_bounds_and_exits_zero() {
    let (report, code) = json_report(&["width", "2", "4"]);
    assert_eq!(code, 0);
    assert_eq!(report["command"], "width");
    assert_eq!(report["inputs"]["k"], 2);
    assert_eq!(report["results"]["lower"], "1");
    assert_eq!(report["results"]["upper"], "1");
    let checks = report["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["name"].is_string());
        assert_eq!(c["pass"], true);
        assert!(!c["value"].is_null());
    }
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    for required in [
        "fixed-point-weights-all-one",
        "symplectic-class-integral",
        "dimension-condition",
        "three-point-invariant-nonzero",
        "lower-equals-upper-equals-one",
    ] {
        assert!(names.contains(&required), "missing check {required}");
    }
    assert!(report["version"].is_string());
}

#[test]
fn width_text_mode_prints_bounds_and_checklist() {
    let out = gwidth(&["width", "1", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"lower\": \"1\""));
    assert!(text.contains("\"upper\": \"1\""));
    assert!(text.contains("PASS  lower-equals-upper-equals-one"));
    assert!(text.contains("verdict: PASS"));
}

#[test]
fn width_rejects_bad_context_with_usage_exit() {
    for args in [&["width", "4", "4"][..], &["width", "0", "3"], &["width", "2", "9"]] {
        let out = gwidth(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn gw_computes_the_spec_examples() {
    let (report, code) = json_report(&["gw", "2", "4", "--a", "2,2", "--b", "1,1", "--c", "2", "--d", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["invariant"], "1");
    assert_eq!(report["checks"][0]["name"], "degree-condition");
    assert_eq!(report["checks"][0]["pass"], true);

    let (report, code) = json_report(&["gw", "2", "4", "--a", "1", "--b", "1", "--c", "2", "--d", "0"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["invariant"], "1");
}

#[test]
fn gw_flags_a_degree_violation_without_erroring() {
    let (report, code) = json_report(&["gw", "2", "4", "--a", "1", "--b", "1", "--c", "1", "--d", "1"]);
    assert_eq!(code, 1, "a failed check is not a usage error");
    assert_eq!(report["results"]["invariant"], "0");
    assert_eq!(report["checks"][0]["name"], "degree-condition");
    assert_eq!(report["checks"][0]["pass"], false);
}

#[test]
fn gw_rejects_unboxed_partitions() {
    let out = gwidth(&["gw", "2", "4", "--a", "3", "--b", "1", "--c", "2", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("does not fit"));
}

#[test]
fn gw_accepts_the_empty_partition() {
    // Degree condition holds (0 + 4 + 4 = 4 + 4), yet no degree-one curve
    // meets two generic points: an honest zero, not an error.
    let (report, code) = json_report(&["gw", "2", "4", "--a", "", "--b", "2,2", "--c", "2,2", "--d", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report["inputs"]["a"], serde_json::json!([]));
    assert_eq!(report["results"]["invariant"], "0");
    assert_eq!(report["checks"][0]["pass"], true);
}

#[test]
fn qh_dumps_the_quantum_product() {
    // sigma_1 * sigma_1 = sigma_{1,1} + sigma_2 in QH*(Gr(2,4)).
    let (report, code) = json_report(&["qh", "2", "4", "--a", "1", "--b", "1"]);
    assert_eq!(code, 0);
    let terms = report["results"]["terms"].as_array().expect("terms");
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["degree"], 0);
    assert_eq!(terms[0]["partition"], serde_json::json!([1, 1]));
    assert_eq!(terms[0]["coefficient"], "1");
    assert_eq!(terms[1]["degree"], 0);
    assert_eq!(terms[1]["partition"], serde_json::json!([2]));
    assert_eq!(terms[1]["coefficient"], "1");

    // sigma_2 * sigma_{1,1} = q: the purely quantum product.
    let (report, code) = json_report(&["qh", "2", "4", "--a", "2", "--b", "1,1"]);
    assert_eq!(code, 0);
    let terms = report["results"]["terms"].as_array().expect("terms");
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["degree"], 1);
    assert_eq!(terms[0]["partition"], serde_json::json!([]));
    assert_eq!(terms[0]["coefficient"], "1");
}

#[test]
fn toric_reports_rectangle_bound_two() {
    let (report, code) = json_report(&["toric", &fixture("rectangle.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["lower_bound"], "2");
    assert_eq!(report["results"]["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(report["checks"][0]["name"], "polytope-is-delzant");
}

#[test]
fn toric_reports_unit_simplex_bound_one() {
    let (report, code) = json_report(&["toric", &fixture("unit-simplex.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["lower_bound"], "1");
}

#[test]
fn toric_rejects_a_non_delzant_triangle_naming_the_vertex() {
    let out = gwidth(&["toric", &fixture("skew-triangle.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("vertex (0, 1)"), "stderr: {err}");
}

#[test]
fn toric_parse_failure_reports_line_and_column() {
    let out = gwidth(&["toric", &fixture("bad-offset.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 4"), "stderr: {err}");
    assert!(err.contains("column"), "stderr: {err}");
}

#[test]
fn toric_missing_file_is_an_input_error() {
    let out = gwidth(&["toric", "/nonexistent/poly.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn centered_region_lists_the_faces_through_the_base_point() {
    // Interior point: only the polytope itself.
    let (report, code) = json_report(&[
        "toric",
        &fixture("unit-square.json"),
        "--alpha",
        "1/2,1/2",
    ]);
    assert_eq!(code, 0);
    let faces = report["results"]["centered_region"]["faces"]
        .as_array()
        .expect("faces");
    assert_eq!(faces.len(), 1);
    assert_eq!(faces[0]["dim"], 2);

    // Edge midpoint: the polytope and the left edge.
    let (report, _) = json_report(&[
        "toric",
        &fixture("unit-square.json"),
        "--alpha",
        "0,1/2",
    ]);
    let faces = report["results"]["centered_region"]["faces"]
        .as_array()
        .expect("faces");
    assert_eq!(faces.len(), 2);

    // Corner: polytope, two edges, and the vertex.
    let (report, _) = json_report(&["toric", &fixture("unit-square.json"), "--alpha", "0,0"]);
    let faces = report["results"]["centered_region"]["faces"]
        .as_array()
        .expect("faces");
    assert_eq!(faces.len(), 4);

    // Outside: input error.
    let out = gwidth(&["toric", &fixture("unit-square.json"), "--alpha", "2,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn moser_standard_passes_and_cp1_meets_tolerance() {
    let (report, code) = json_report(&["moser", "standard", "--t-final", "2"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for required in [
        "form-closed",
        "form-rotation-invariant",
        "moment-identity",
        "pullback-residual-within-tolerance",
    ] {
        assert!(names.contains(&required), "missing check {required}");
    }

    let (report, code) = json_report(&["moser", "cp1", "--t-final", "3", "--samples", "100"]);
    assert_eq!(code, 0);
    let residual = report["results"]["residual"]
        .as_f64()
        .expect("residual is a number");
    assert!(residual <= 1e-4, "residual {residual}");
}

#[test]
fn moser_rejects_backward_time_and_unknown_forms() {
    let out = gwidth(&["moser", "cp1", "--t-final", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains(">= 0"));

    let out = gwidth(&["moser", "nosuchform"]);
    assert_eq!(out.status.code(), Some(2));

    let out = gwidth(&["moser", "cp1", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn moser_exits_one_when_the_residual_check_fails() {
    let out = gwidth(&[
        "--json",
        "--tolerance",
        "1e-15",
        "moser",
        "cp1",
        "--t-final",
        "1",
        "--samples",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(stdout(&out).trim()).expect("json");
    let checks = report["checks"].as_array().unwrap();
    let flagged = checks
        .iter()
        .find(|c| c["name"] == "pullback-residual-within-tolerance")
        .expect("residual check present");
    assert_eq!(flagged["pass"], false);
}

#[test]
fn selftest_passes() {
    let (report, code) = json_report(&["selftest"]);
    assert_eq!(code, 0);
    assert!(report["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    for args in [
        &["--json", "width", "3", "6"][..],
        &["--json", "moser", "cp1", "--t-final", "2", "--samples", "20"],
        &["--json", "toric", &fixture("rectangle.json"), "--alpha", "0,0"],
        &["--json", "selftest"],
    ] {
        let a = gwidth(args);
        let b = gwidth(args);
        assert_eq!(stdout(&a), stdout(&b), "args {args:?}");
        assert!(!stdout(&a).is_empty());
    }
}

#[test]
fn timings_stay_out_of_the_json_report() {
    let out = gwidth(&["--json", "moser", "standard", "--t-final", "1", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("timing"));

    // Text mode reports them on stderr, keeping stdout parseable.
    let out = gwidth(&["moser", "standard", "--t-final", "1", "--samples", "5"]);
    assert!(stderr(&out).contains("timings:"));
    assert!(!stdout(&out).contains("timings:"));
}

#[test]
fn the_seed_flag_changes_the_sample_set_but_not_the_schema() {
    let (a, code_a) = json_report(&["--seed", "1", "moser", "cp1", "--t-final", "2", "--samples", "15"]);
    let (b, code_b) = json_report(&["--seed", "2", "moser", "cp1", "--t-final", "2", "--samples", "15"]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_ne!(
        a["results"]["residual"], b["results"]["residual"],
        "different seeds should sample different points"
    );
    assert_eq!(a["results"]["samples"], b["results"]["samples"]);
}

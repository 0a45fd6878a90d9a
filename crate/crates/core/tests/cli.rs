use std::path::PathBuf;
use std::process::Command;

use cinf_core::cli::AlgebraFile;
use cinf_core::harrison::{Complex, Flavor};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cinf(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cinf")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn cinf_json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out) = cinf(&a);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn temp_file(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("cinf-test-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn lift_on_s2_reports_zero_residuals() {
    let (code, r) = cinf_json(&["lift", "--algebra", &data("s2.json"), "--structure", &data("s2_conjugated.json"), "--order", "6"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["schema"], "cinf.report");
    assert_eq!(r["version"], 1);
    assert_eq!(r["status"], "pass");
    let res = &r["result"]["lift"]["residuals"];
    for key in ["square", "symplectic", "conjugation", "pointed"] {
        assert_eq!(res[key], "0", "{key}");
    }
}

#[test]
fn lift_of_strict_product_needs_no_stage_work() {
    let (code, r) = cinf_json(&["lift", "--algebra", &data("cp2.json"), "--order", "6", "--two-step-crosscheck"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["lift"]["structure"]["parts"], serde_json::json!([]));
    assert_eq!(r["result"]["two_step"]["all_zero"], true);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["lift", "--algebra", &data("s2xs2.json"), "--structure", &data("s2xs2_conjugated.json"), "--order", "6", "--unital", "--json"];
    let a = cinf(&args);
    let b = cinf(&args);
    assert_eq!(a, b);
    let c = cinf(&["verify-cartan", "--samples", "10", "--seed", "4", "--json"]);
    assert_eq!(c, cinf(&["verify-cartan", "--samples", "10", "--seed", "4", "--json"]));
}

#[test]
fn non_associative_algebra_is_a_validation_error() {
    let (code, r) = cinf_json(&["check", "--algebra", &data("non_associative.json")]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "input-error");
    assert_eq!(r["error"]["code"], "E-VALIDATION");
    assert_eq!(r["error"]["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let bad = temp_file("bad.json", "{\n  \"basis\": [\n    {\"name\": \"1\" \"degree\": 0}\n  ]\n}\n");
    let (code, r) = cinf_json(&["check", "--algebra", &bad]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["code"], "E-SYNTAX");
    assert_eq!(r["error"]["line"], 3);
    assert!(r["error"]["column"].as_u64().unwrap() > 0);
}

#[test]
fn structure_expression_errors() {
    let s = temp_file("bad_structure.json", r#"{"parts": [{"order": 3, "images": {"t_x": "[tau, [tau, q]]"}}]}"#);
    let (code, r) = cinf_json(&["check", "--algebra", &data("s2.json"), "--structure", &s]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["code"], "E-SYNTAX");
    assert_eq!(r["error"]["column"], 13);
    let s = temp_file("bad_degree.json", r#"{"parts": [{"order": 3, "images": {"t_x": "[tau, [tau, t_x]]"}}]}"#);
    let (_, r) = cinf_json(&["check", "--algebra", &data("s2.json"), "--structure", &s]);
    assert_eq!(r["error"]["code"], "E-DEGREE");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cinf(&["frobnicate"]).0, 2);
    assert_eq!(cinf(&["lift", "--algebra", &data("s2.json")]).0, 2);
}

#[test]
fn check_finds_non_symplectic_structures() {
    let (code, r) = cinf_json(&["check", "--algebra", &data("cp2.json"), "--structure", &data("cp2_conjugated.json")]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["structure"]["cn"], true);
    assert!(r["result"]["structure"]["invariance_violation"].is_object());
}

#[test]
fn cohomology_matches_dense_ranks() {
    let alg = AlgebraFile::load(data("cp2.json").as_ref()).unwrap().build(true).unwrap();
    for (name, flavor) in [("harrison", Flavor::Harrison), ("dual", Flavor::Dual), ("cyclic", Flavor::Cyclic)] {
        let (code, r) = cinf_json(&["cohomology", "--algebra", &data("cp2.json"), "--flavor", name, "--bidegree-window", "4"]);
        assert_eq!(code, 0);
        let c = Complex::new(&alg, flavor, false).unwrap();
        let blocks = r["result"]["blocks"].as_array().unwrap();
        assert!(!blocks.is_empty());
        for b in blocks {
            let (order, j) = (b["order"].as_u64().unwrap() as usize, b["degree"].as_i64().unwrap());
            let (_, _, dim) = c.dense_dims(order, j);
            assert_eq!(b["dim"].as_u64().unwrap() as usize, dim, "{name} ({order}, {j})");
        }
    }
}

#[test]
fn verify_i_passes_on_s2() {
    let (code, r) = cinf_json(&["verify-I", "--algebra", &data("s2.json"), "--window", "4"]);
    assert_eq!(code, 0);
    let rows = r["result"]["rows"].as_array().unwrap();
    assert!(rows.iter().all(|row| row["holds"] == true));
    assert!(rows.iter().any(|row| row["i"] == 1 && row["expected"] == "mono"));
}

#[test]
fn obstruction_and_extension_commands() {
    let (code, r) = cinf_json(&["obstruction", "--algebra", &data("s2xs2.json"), "--structure", &data("s2xs2_conjugated.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["obstruction"]["bidegree"], serde_json::json!([7, 3]));
    let (code, r) = cinf_json(&["extend", "--algebra", &data("cp2.json"), "--level", "4", "--flavor", "symplectic"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["structure"]["level"], 5);
}

#[test]
fn obstructed_extension_is_a_finding() {
    let alg = temp_file(
        "zero.json",
        r#"{"basis": [{"name": "e0", "degree": 0}, {"name": "e1", "degree": 1}, {"name": "e2", "degree": 2}]}"#,
    );
    let s = temp_file(
        "zero_m3.json",
        r#"{"level": 4, "parts": [{"order": 3, "images": {"t_e0": "[[t_e0, t_e0], t_e1]", "t_e1": "[[t_e0, t_e1], t_e1]"}}]}"#,
    );
    let (code, r) = cinf_json(&["extend", "--algebra", &alg, "--structure", &s]);
    assert_eq!(code, 1, "{r}");
    assert_eq!(r["status"], "finding");
    assert_eq!(r["result"]["extended"], false);
    assert_eq!(r["result"]["obstruction"]["zero"], false);
}

#[test]
fn lift_morphism_command() {
    let (code, r) = cinf_json(&[
        "lift-morphism",
        "--algebra",
        &data("s2xs2.json"),
        "--source",
        &data("strict.json"),
        "--target",
        &data("strict.json"),
        "--morphism",
        &data("s2xs2_automorphism.json"),
        "--order",
        "6",
    ]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["all_zero"], true);
}

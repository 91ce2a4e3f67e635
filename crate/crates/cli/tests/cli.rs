use std::process::{Command, Output};

use serde_json::Value;

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul")).args(args).output().expect("koszul runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn tmp(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("koszul-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn koszul_dual_of_uas_reports_dims_and_the_associativity_generator() {
    let o = koszul(&["koszul-dual", "--input", "uas.json", "--max-arity", "4", "--max-weight", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["window"]["max_arity"], 4);
    let dims = r["result"]["dims"].as_array().unwrap();
    let at = |n: u64, w: u64| dims.iter().find(|d| d["arity"] == n && d["weight"] == w).map(|d| d["dim"].as_u64().unwrap());
    assert_eq!(at(2, 1), Some(1));
    assert_eq!(at(3, 2), Some(1));
    assert_eq!(r["result"]["quadratic_part"]["3"][0], "-1/1*(smu smu |) + 1/1*(smu | smu)");
    assert_eq!(r["result"]["curvature"]["(smu sxi |)"], "-1/1");
}

#[test]
fn schema_violation_exits_2_with_location() {
    let bad = tmp("bad.json", r#"{"schema_version": 1, "kind": "presentation", "generators": [{"name": "mu", "arity": "two", "degree": 0}], "relations": []}"#);
    let o = koszul(&["koszul-dual", "--input", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let r = report(&o);
    assert_eq!(r["error"]["kind"], "schema");
    assert!(r["error"]["message"].as_str().unwrap().contains("generators[0].arity"));
}

#[test]
fn wrong_schema_version_and_unknown_kind() {
    let o = koszul(&["check-uainf", "--input", "bad_version.json"]);
    assert_eq!(o.status.code(), Some(2));
    let p = tmp("kind.json", r#"{"schema_version": 1, "kind": "spectral_sequence"}"#);
    assert_eq!(koszul(&["homology", "--input", &p]).status.code(), Some(2));
}

#[test]
fn failed_validation_exits_1_with_witness() {
    let o = koszul(&["check-twisting", "--input", "kappa_scaled.json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["result"]["twisting_equation"]["witness"]["at"], "(smu sxi |)");
}

#[test]
fn missing_degrees_exit_3() {
    let o = koszul(&["homology", "--input", "circle_truncated.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(report(&o)["error"]["kind"], "window_too_small");
    let o = koszul(&["homology", "--input", "circle_truncated.json", "--degree-range", "0..1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["result"]["betti"]["1"], 1);
}

#[test]
fn inconsistent_window_is_a_schema_error() {
    let o = koszul(&["homology", "--input", "circle.json", "--degree-range", "3..1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decomposition_report() {
    let r = report(&koszul(&["decompose-cocom", "--input", "two_atoms.json"]));
    let comps = r["result"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["atom"].as_str().unwrap(), "1/1*a");
    let o = koszul(&["decompose-cocom", "--input", "gaussian_dual.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["error"]["kind"], "non_split_semisimple");
}

#[test]
fn text_format_and_output_file() {
    let out = std::env::temp_dir().join(format!("koszul-out-{}.txt", std::process::id()));
    let o = koszul(&["check-uainf", "--input", "homotopy_unital.json", "--format", "text", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l == "status: pass"));
    assert!(text.lines().any(|l| l == "result.dim: 3"));
}

#[test]
fn every_fixture_command_passes() {
    for (cmd, input) in [
        ("bar-operad", "uas.json"),
        ("cobar-operad", "uas.json"),
        ("check-twisting", "kappa.json"),
        ("bar-alg", "dual_numbers.json"),
        ("cobar-coalg", "dual_numbers.json"),
        ("check-uainf", "nonassociative_ainf.json"),
        ("check-curved-lie", "bar_lie_dual_numbers.json"),
        ("bar-lie", "ground_field.json"),
        ("cobar-com", "dual_numbers.json"),
        ("verify-koszul", "as.json"),
        ("decompose-cocom", "three_grouplikes.json"),
    ] {
        let o = koszul(&[cmd, "--input", input]);
        assert_eq!(o.status.code(), Some(0), "{cmd} {input}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    root().join("corpus").join(name).display().to_string()
}

fn fpverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpverify"))
        .args(args)
        .env_remove("FPVERIFY_MAX_COSETS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn assert_valid(schema: &str, doc: &Value) {
    let text = std::fs::read_to_string(root().join("schemas").join(format!("{schema}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn parse_prints_canonical_text() {
    let o = fpverify(&["parse", &corpus("pi1-N-reduced.grp")]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("name: pi1-N-reduced\n< a, c, g, h, q | "), "{text}");
    let reparsed = fpverify::parse_presentation(&text).unwrap();
    assert_eq!(reparsed.relators().len(), 7);
}

#[test]
fn parse_missing_file_is_an_input_error() {
    let o = fpverify(&["parse", "/nonexistent"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn parse_error_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.grp");
    std::fs::write(&path, "< a, b |\n  a^2, b^ >").unwrap();
    let o = fpverify(&["parse", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("2:"), "{err}");
}

#[test]
fn parse_json_export() {
    let o = fpverify(&["parse", "--json", &corpus("pi1-E0-tilde.grp")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_valid("presentation", &v);
    assert_eq!(v["generators"].as_array().unwrap().len(), 6);
    assert_eq!(v["relators"].as_array().unwrap().len(), 9);
}

#[test]
fn tc_reduced_presentation_is_trivial() {
    let o = fpverify(&["tc", &corpus("pi1-N-reduced.grp")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_valid("enumeration", &v);
    assert_eq!(v["status"], "Completed");
    assert_eq!(v["index"], 1);
    assert_eq!(v["convention"], "default");
}

#[test]
fn tc_limit_exits_with_resource_code() {
    let o = fpverify(&["tc", "--max-cosets", "10", &corpus("pi1-N-full.grp")]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_valid("enumeration", &v);
    assert_eq!(v["status"], "LimitExceeded");
    assert_eq!(v["index"], Value::Null);
}

#[test]
fn max_cosets_env_var() {
    let o = Command::new(env!("CARGO_BIN_EXE_fpverify"))
        .args(["tc", &corpus("pi1-N-full.grp")])
        .env("FPVERIFY_MAX_COSETS", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn tc_symmetric_group_and_subgroup() {
    for strategy in ["hlt", "hlt-lookahead", "felsch"] {
        let o = fpverify(&["tc", "--strategy", strategy, &corpus("battery/s3.grp")]);
        assert_eq!(json(&o)["index"], 6, "{strategy}");
    }
    let o = fpverify(&["tc", "--subgroup", "s", &corpus("battery/s3.grp")]);
    assert_eq!(json(&o)["index"], 3);
}

#[test]
fn abelianize_outputs() {
    for (file, want) in [
        ("pi1-E0-tilde.grp", r#"{"free_rank":2,"torsion":[]}"#),
        ("pi1-N-reduced.grp", r#"{"free_rank":0,"torsion":[]}"#),
        ("battery/z2.grp", r#"{"free_rank":0,"torsion":[2]}"#),
    ] {
        let o = fpverify(&["abelianize", &corpus(file)]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o).trim(), want, "{file}");
        assert_valid("abelian", &json(&o));
    }
}

#[test]
fn simplify_json() {
    let o = fpverify(&["simplify", "--json", &corpus("conjugacy-x.grp")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_valid("simplify", &v);
    assert_eq!(v["presentation"]["generators"].as_array().unwrap().len(), 2);
}

#[test]
fn certify_finds_and_checks() {
    let o = fpverify(&["certify", &corpus("derive-qc-commute.grp"), "--target", "[q,c] = 1", "--max-factors", "4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_valid("certify", &v);
    let cert = &v["results"][0]["certificate"];
    assert_valid("certificate", cert);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    std::fs::write(&path, cert.to_string()).unwrap();
    let o = fpverify(&["certify", &corpus("derive-qc-commute.grp"), "--check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(json(&o)["valid"], true);
}

#[test]
fn certify_refutes_by_exponent_sums() {
    let o = fpverify(&["certify", &corpus("battery/z3.grp"), "--target", "a = 1"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["results"][0]["refuted"].is_string());
}

#[test]
fn certify_falls_back_to_enumeration() {
    let o = fpverify(&[
        "certify",
        &corpus("pi1-N-reduced.grp"),
        "--target",
        "a = 1",
        "--max-factors",
        "2",
        "--max-nodes",
        "200",
        "--enumerate",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_valid("certify", &v);
    assert_valid("derivation", &v["results"][0]["derivation"]);
}

#[test]
fn stored_certificate_files_check() {
    for id in ["conjugacy-x", "derive-cx-commute", "derive-gx2", "derive-qc-commute"] {
        let file = corpus(&format!("{id}.certs.json"));
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
        assert_valid("certificate-file", &v);
        let over = v["certificates"][0]["over"].as_str().unwrap();
        let o = fpverify(&["certify", &corpus(&format!("{over}.grp")), "--check", &file]);
        assert_eq!(code(&o), 0, "{id}");
    }
}

#[test]
fn expectation_files_match_schema() {
    for id in fpverify::corpus::scenario_ids() {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(corpus(&format!("{id}.expect.json"))).unwrap()).unwrap();
        assert_valid("expectation", &v);
    }
}

#[test]
fn verify_single_scenario() {
    let o = fpverify(&["verify", "--scenario", "derive-qc-commute"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("[PASS] derive-qc-commute"), "{text}");
    assert!(text.contains("implies $ [q,c]=1$"), "{text}");
    assert!(text.contains("convention default"), "{text}");
}

#[test]
fn verify_json_report() {
    let o = fpverify(&["verify", "--json", "--scenario", "pi1-N-full", "--scenario", "derive-gx2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_valid("run-report", &v);
    assert_eq!(v["outcome"], "pass");
    let ids: Vec<&str> = v["scenarios"].as_array().unwrap().iter().map(|s| s["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["pi1-N-full", "derive-gx2"]);
}

#[test]
fn verify_under_gap_convention_is_recorded() {
    let o = Command::new(env!("CARGO_BIN_EXE_fpverify"))
        .args(["verify", "--json", "--scenario", "pi1-N-reduced", "--convention", "gap"])
        .env("FPVERIFY_MAX_COSETS", "20000")
        .output()
        .unwrap();
    let v = json(&o);
    assert_valid("run-report", &v);
    assert_eq!(v["convention"], "gap");
    assert_eq!(v["max_cosets"], 20000);
    let expected = match v["outcome"].as_str().unwrap() {
        "pass" => 0,
        "fail" => 1,
        _ => 3,
    };
    assert_eq!(code(&o), expected);
}

#[test]
fn verify_mismatch_exits_one() {
    let o = fpverify(&["verify", "--scenario", "derive-gx2", "--convention", "gap"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("[FAIL] derive-gx2"));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(code(&fpverify(&["verify", "--scenario", "no-such-thing"])), 2);
    assert_eq!(code(&fpverify(&["verify"])), 2);
    assert_eq!(code(&fpverify(&["frobnicate"])), 2);
}

#[test]
fn verify_list() {
    let o = fpverify(&["verify", "--list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), fpverify::corpus::scenario_ids().len());
}

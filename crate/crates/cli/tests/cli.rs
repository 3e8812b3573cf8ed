use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const A1: &str = r#"{"name":"A1","cartan":[[2]],"mu":[1]}"#;
const A2_FLIP: &str = r#"{"name":"A2-flip","cartan":[[2,-1],[-1,2]],"mu":[2,1]}"#;
const A3_FLIP: &str = r#"{"name":"A3-flip","cartan":[[2,-1,0],[-1,2,-1],[0,-1,2]],"mu":[3,2,1]}"#;
const A2_AFFINE_ROTATION: &str =
    r#"{"name":"A2(1) rotation","cartan":[[2,-1,-1],[-1,2,-1],[-1,-1,2]],"mu":[2,3,1]}"#;

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn taffin(args: &[&str], cfg: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taffin"))
        .args(args)
        .arg("-c")
        .arg(cfg)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report-v1.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&s).expect("schema compiles")
}

fn assert_schema(v: &Value) {
    let s = schema();
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => vec![],
        Err(errs) => errs
            .map(|e| format!("{e} at {}", e.instance_path))
            .collect(),
    };
    assert!(msgs.is_empty(), "report violates schema: {msgs:?}");
}

#[test]
fn orbits_on_a3_flip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a3.json", A3_FLIP);
    let out = taffin(&["orbits"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["d"]["(1,2)"], 2);
    assert_eq!(v["results"]["d_plus"]["2"], 2);
    assert_eq!(v["command"], "orbits");
    assert_schema(&v);
    // the dumped orbit data re-parses to the same object
    let od: taffin_core::cartan::OrbitData = serde_json::from_value(v["results"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&od).unwrap(), v["results"]);
}

#[test]
fn validate_rejects_affine_a2_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "rot.json", A2_AFFINE_ROTATION);
    let out = taffin(&["validate"], &cfg);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let lc = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "linking_condition")
        .unwrap();
    assert_eq!(lc["passed"], false);
    assert!(lc["offending"]
        .as_array()
        .unwrap()
        .contains(&Value::from("(1,2)")));
    assert_schema(&v);

    let cfg = write_config(dir.path(), "a2.json", A2_FLIP);
    assert_eq!(taffin(&["validate"], &cfg).status.code(), Some(0));
}

#[test]
fn verify_q7_on_untwisted_a1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a1.json", A1);
    let out = taffin(&["verify", "--relations", "Q7", "--mode-window", "2"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let reports = v["results"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["relation"], "Q7");
    assert_eq!(reports[0]["status"], "pass");
    assert!(reports[0]["coefficients_checked"].as_u64().unwrap() > 0);
    assert_eq!(v["results"]["qi_interpretation"], "q");
    assert!(v["discrepancy_log"].as_array().unwrap().len() >= 2);
    assert_schema(&v);
}

#[test]
fn failing_verification_exits_one_with_witness() {
    // q_i = q^{d_i} gives the wrong constant for the degree-two representative
    let dir = tempfile::tempdir().unwrap();
    let body = A3_FLIP.replace("}", r#","qi_interpretation":"q^d_i"}"#);
    let cfg = write_config(dir.path(), "a3.json", &body);
    let out = taffin(
        &[
            "verify",
            "--relations",
            "Q7",
            "--mode-window",
            "1",
            "--basis-degree",
            "1",
        ],
        &cfg,
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failing: Vec<&Value> = v["results"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|r| r["instance"][0] == 2));
    assert!(failing[0]["first_failure"]["lhs"].is_string());
    assert_schema(&v);
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"cartan":[[2,-1],[-1,2]],"mu":[1,1]}"#,
    );
    let out = taffin(&["orbits"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu[1]"));

    let cfg = write_config(
        dir.path(),
        "bad2.json",
        r#"{"cartan":[[2,-1],[-1,2]],"mu":[1,2],"truncation":{"basis_degree":-1}}"#,
    );
    let out = taffin(&["orbits"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncation.basis_degree"));

    // not a diagram automorphism
    let cfg = write_config(
        dir.path(),
        "bad3.json",
        r#"{"cartan":[[2,-1,0],[-1,2,-1],[0,-1,2]],"mu":[2,1,3]}"#,
    );
    assert_eq!(taffin(&["orbits"], &cfg).status.code(), Some(2));

    let cfg = write_config(dir.path(), "a1.json", A1);
    assert_eq!(
        taffin(&["verify", "--relations", "Q11"], &cfg)
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(taffin(&["orbits"], &missing).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_and_schema_valid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a2.json", A2_FLIP);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = taffin(
            &[
                "verify",
                "--mode-window",
                "1",
                "--basis-degree",
                "1",
                "--out",
                out.to_str().unwrap(),
            ],
            &cfg,
        );
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    let a = run("r1.json");
    let b = run("r2.json");
    assert_eq!(a, b);
    assert_schema(&serde_json::from_slice(&a).unwrap());

    for cmd in ["validate", "relations", "identities"] {
        let o = taffin(&[cmd, "--coeff-order", "4"], &cfg);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        assert_schema(&json(&o));
    }
}

#[test]
fn text_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a2.json", A2_FLIP);
    let o = taffin(&["relations", "--emit", "text", "--coeff-order", "3"], &cfg);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("Q7"));
    assert!(text.contains("Q10"));
    assert!(text.trim_end().ends_with("PASS"));
}

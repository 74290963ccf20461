use std::path::Path;
use std::process::{Command, Output};

fn effectus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effectus"))
        .args(args)
        .env_remove("EFFECTUS_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn prob_check_passes() {
    let o = effectus(&["check", "--instance", "prob", "--seed", "42", "--trials", "500"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("26 pass, 0 fail"));
}

#[test]
fn hadamard_probe_fails_with_witness() {
    let o = effectus(&["check", "--instance", "quantum", "--suites", "duality-perturbed", "--unitary", "hadamard"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness: {"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&effectus(&["check", "--instance", "nosuch"])), 2);
    assert_eq!(code(&effectus(&["check", "--instance", "prob", "--suites", "nosuch"])), 2);
    assert_eq!(code(&effectus(&["check", "--instance", "prob", "--suites", "boolean-laws"])), 2);
    assert_eq!(code(&effectus(&["check", "--instance", "prob", "--tol", "bogus=1"])), 2);
    assert_eq!(code(&effectus(&["check", "--instance", "prob", "--trials", "0"])), 2);
    assert_eq!(code(&effectus(&["frobnicate"])), 2);
    assert_eq!(code(&effectus(&["--help"])), 0);
}

#[test]
fn json_report_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = effectus(&[
        "check",
        "--instance",
        "quantum",
        "--suites",
        "duality,duality-perturbed",
        "--trials",
        "50",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let printed: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(printed["schema_version"], 1);
    assert_eq!(printed["status"], "fail");
    assert_eq!(printed["suites"][0]["status"], "pass");
    assert_eq!(printed["suites"][1]["status"], "fail");
    assert_eq!(printed["suites"][1]["failures"], saved["suites"][1]["failures"]);

    let o = effectus(&["replay", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(!stdout(&o).contains("differs"));

    let case = &printed["suites"][1]["failures"][0];
    let path = write(dir.path(), "case.json", &case.to_string());
    let o = effectus(&["replay", &path, "--format", "json"]);
    assert_eq!(code(&o), 1);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r[0]["reproduced"], true);

    let mut stale = case.clone();
    stale["schema_version"] = 7.into();
    let path = write(dir.path(), "stale.json", &stale.to_string());
    assert_eq!(code(&effectus(&["replay", &path])), 2);
}

#[test]
fn replay_of_passing_report_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = effectus(&["check", "--instance", "boolean", "--suites", "bayes", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = effectus(&["replay", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no recorded failures"));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_effectus"));
        c.args(["check", "--instance", "prob", "--suites", "bayes", "--trials", "5", "--format", "json"]);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        match env {
            Some(s) => c.env("EFFECTUS_SEED", s),
            None => c.env_remove("EFFECTUS_SEED"),
        };
        let v: serde_json::Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        v["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 0);
    assert_eq!(run(Some("17"), None), 17);
    assert_eq!(run(Some("17"), Some("3")), 3);
}

#[test]
fn stable_output() {
    let args = ["check", "--instance", "quantum", "--suites", "bayes,duality-perturbed", "--format", "json"];
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for s in v["suites"].as_array_mut().unwrap() {
            s.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    assert_eq!(strip(effectus(&args)), strip(effectus(&args)));
}

#[test]
fn eval_examples() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "v.json",
        r#"{"instance":"prob","op":"validity","state":["1/2","1/2"],"pred":["1","0"]}"#,
    );
    let o = effectus(&["eval", &p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("1/2\n"));
    assert!(stdout(&o).contains("exact rational"));

    let p = write(
        dir.path(),
        "c.json",
        r#"{"instance":"quantum","op":"condition","state":{"vector":[0.7071067811865476,0.7071067811865476]},"pred":[[[1,0],[0,0]]]}"#,
    );
    let o = effectus(&["eval", &p, "--format", "json", "--tol", "tight=1e-10"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tolerances"]["tight"], 1e-10);
    let rho = &v["value"][0];
    assert!((rho[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(rho[1][1].as_f64().unwrap().abs() < 1e-12);

    let p = write(dir.path(), "bad.json", "{ \"instance\": ");
    let o = effectus(&["eval", &p]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(code(&effectus(&["eval", "/nonexistent/file.json"])), 2);
}

#[test]
fn list_suites() {
    let o = effectus(&["list", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 28);
    let o = effectus(&["list", "--instance", "boolean"]);
    assert_eq!(stdout(&o).lines().count(), 25);
}

#[test]
fn json_reports_match_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in [
        &["check", "--instance", "boolean", "--format", "json", "--suites", "bayes,boolean-laws"][..],
        &["check", "--instance", "prob", "--format", "json", "--trials", "20"],
        &["check", "--instance", "quantum", "--format", "json", "--trials", "20"],
    ] {
        let o = effectus(args);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hardylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardylab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

fn norm_value(f: &str, alpha: &str) -> f64 {
    let out = hardylab(&["norm", "--f", f, "--alpha", alpha]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    stdout(&out).lines().next().unwrap().parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

const SMALL: [&str; 6] = ["--trials", "3", "--grid", "512", "--window", "-8:24"];

#[test]
fn norm_of_one_is_one() {
    let one = r#"{"coeffs":[[0,1,0]]}"#;
    assert_eq!(norm_value(one, r#"{"kind":"p","p":2}"#), 1.0);
    let exp = norm_value(one, r#"{"kind":"orlicz","psi":"expMinusOne"}"#);
    assert!((exp - 1.0).abs() <= 1e-9, "{exp}");
}

#[test]
fn norm_of_one_plus_z() {
    let v = norm_value(r#"{"coeffs":[[0,1,0],[1,1,0]]}"#, r#"{"kind":"p","p":2}"#);
    assert!((v - std::f64::consts::SQRT_2).abs() <= 1e-8, "{v}");
}

#[test]
fn norm_echoes_descriptor() {
    let out = hardylab(&["norm", "--f", r#"{"coeffs":[[0,1,0]]}"#, "--alpha", r#"{"kind":"sup"}"#]);
    let text = stdout(&out);
    let body: Value = serde_json::from_str(text.split_once('\n').unwrap().1).unwrap();
    assert_eq!(body["alpha"]["kind"], "sup");
    assert_eq!(body["value"], 1.0);
}

#[test]
fn malformed_literals_exit_2() {
    assert_eq!(code(&hardylab(&["norm", "--f", "{bad", "--alpha", r#"{"kind":"p","p":2}"#])), 2);
    assert_eq!(code(&hardylab(&["norm", "--f", r#"{"coeffs":[[0,1,0]]}"#, "--alpha", r#"{"kind":"q"}"#])), 2);
    assert_eq!(code(&hardylab(&["probe", "lemma24", "--window", "8"])), 2);
    assert_eq!(code(&hardylab(&["probe", "lemma24", "--tol", "nonsense=1"])), 2);
}

#[test]
fn decompose_splits_by_residue() {
    let out = hardylab(&["decompose", "--f", r#"{"coeffs":[[-1,1,0],[2,3,0],[5,2,0]]}"#, "--n", "3"]);
    assert_eq!(code(&out), 0);
    let body = json(&out);
    assert_eq!(body["components"][0]["coeffs"], serde_json::json!([]));
    // z^{-1} has residue 2 and z^5 = z^2 z^3
    assert_eq!(body["components"][2]["coeffs"], serde_json::json!([[-3, 1.0, 0.0], [0, 3.0, 0.0], [3, 2.0, 0.0]]));
    assert_eq!(body["reconstruction_error"], 0.0);
}

#[test]
fn unimodular_accepts_and_rejects() {
    let good = hardylab(&["unimodular", "--f", r#"{"coeffs":[[0,0.6,0],[1,0.8,0]]}"#, "--n", "2"]);
    assert_eq!(code(&good), 0);
    assert_eq!(json(&good)["pass"], true);
    let bad = hardylab(&["unimodular", "--f", r#"{"coeffs":[[0,0.6,0],[2,0.8,0]]}"#, "--n", "2"]);
    assert_eq!(code(&bad), 1);
    assert_eq!(json(&bad)["pass"], false);
}

#[test]
fn unknown_probe_exits_2() {
    let out = hardylab(&["probe", "lemma99"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown probe"));
}

#[test]
fn unimodular_probe_agrees_on_every_fixture() {
    let out = hardylab(&["probe", "lemma24", "--trials", "50", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["pass"], true);
    let fixtures = report["fixtures"].as_array().unwrap();
    let unimodular = fixtures.iter().filter(|f| f["id"].as_str().unwrap().starts_with("unimodular")).count();
    assert_eq!(unimodular, 50);
    assert!(fixtures.iter().all(|f| f["pass"] == true));
}

#[test]
fn pullback_probe_recovers_phi() {
    let out = hardylab(&["probe", "thm41", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["probe"], "thm41");
    assert_eq!(report["pass"], true);
}

#[test]
fn sup_norm_fails_continuity() {
    let mut args = vec!["probe", "axioms", "--alpha", r#"{"kind":"sup"}"#];
    args.extend(SMALL);
    let out = hardylab(&args);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    let cont = report["fixtures"].as_array().unwrap().iter().find(|f| f["id"] == "continuity").unwrap();
    assert_eq!(cont["pass"], false);
    assert!(cont["message"].as_str().unwrap().contains("not continuous"));
}

#[test]
fn reports_are_byte_identical() {
    let mut args = vec!["probe", "thm33", "--seed", "11"];
    args.extend(SMALL);
    let a = hardylab(&args);
    let b = hardylab(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_schema() {
    let mut args = vec!["probe", "cesaro", "--tol", "bound=1e-9", "--grid", "512"];
    args.extend(&SMALL[..2]);
    let report = json(&hardylab(&args));
    for key in ["probe", "anchor", "config", "fixtures", "pass"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["config"]["tolerances"]["bound"], 1e-9);
    for f in report["fixtures"].as_array().unwrap() {
        for key in ["id", "pass", "error", "tolerance"] {
            assert!(f.get(key).is_some(), "fixture missing {key}");
        }
    }
}

#[test]
fn merge_combines_reports() {
    let pass_a = scratch("merge_a.json");
    let pass_b = scratch("merge_b.json");
    let fail = scratch("merge_fail.json");
    let mut args = vec!["probe", "lemma23", "--out", pass_a.to_str().unwrap()];
    args.extend(SMALL);
    assert_eq!(code(&hardylab(&args)), 0);
    let mut args = vec!["probe", "lemma36", "--out", pass_b.to_str().unwrap()];
    args.extend(SMALL);
    assert_eq!(code(&hardylab(&args)), 0);
    let mut args = vec!["probe", "axioms", "--alpha", r#"{"kind":"sup"}"#, "--out", fail.to_str().unwrap()];
    args.extend(SMALL);
    assert_eq!(code(&hardylab(&args)), 1);

    let both = hardylab(&["merge", pass_a.to_str().unwrap(), pass_b.to_str().unwrap()]);
    assert_eq!(code(&both), 0);
    let body = json(&both);
    assert_eq!(body["pass"], true);
    assert_eq!(body["probes"].as_array().unwrap().len(), 2);

    let mixed = hardylab(&["merge", pass_a.to_str().unwrap(), fail.to_str().unwrap()]);
    assert_eq!(code(&mixed), 1);
    assert_eq!(json(&mixed)["pass"], false);

    let empty = hardylab(&["merge"]);
    assert_eq!(code(&empty), 0);
    assert_eq!(json(&empty)["probes"], serde_json::json!([]));
}

#[test]
fn merge_rejects_malformed_files() {
    let bad = scratch("merge_bad.json");
    std::fs::write(&bad, "{\"probe\": 3}").unwrap();
    assert_eq!(code(&hardylab(&["merge", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&hardylab(&["merge", "/nonexistent/report.json"])), 2);
}

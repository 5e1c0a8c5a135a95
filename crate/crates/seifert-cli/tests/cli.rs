mod common;

use std::process::Command;
use std::sync::OnceLock;

use proptest::prelude::*;
use serde_json::Value;
use seifert_core::{atlas, Surface};

fn seifert(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_seifert")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let text = include_str!("../schema/output.schema.json");
        let schema: Value = serde_json::from_str(text).expect("schema is JSON");
        jsonschema::validator_for(&schema).expect("schema compiles")
    })
}

/// Runs with `--json` and checks every output line against the schema.
fn json(args: &[&str]) -> (i32, Vec<Value>) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, stdout, _) = seifert(&full);
    let values: Vec<Value> = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{args:?}: not JSON ({e}): {l}")))
        .collect();
    for v in &values {
        if let Err(e) = validator().validate(v) {
            panic!("{args:?}: schema violation {e} in {v}");
        }
    }
    (code, values)
}

#[test]
fn classify_example() {
    let (code, out, _) = seifert(&["classify", "S2(2,2,4); 0/2,0/2,2/4; ; -1/2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "spherical; fibrations: 3");
}

#[test]
fn diffeo_exit_codes() {
    assert_eq!(seifert(&["diffeo", "S2(2,2); 0/2,0/2; ; -1", "D2; ; ; -1; 0"]).0, 0);
    assert_eq!(seifert(&["diffeo", "S2(2,2); 0/2,0/2; ; -1", "D2; ; ; -1/2; 1"]).0, 3);
    assert_eq!(seifert(&["diffeo", "S2(2,2; nonsense", "D2; ; ; -1; 0"]).0, 1);
}

#[test]
fn quotient_example() {
    let (code, out, _) = seifert(&["quotient", "F5(m=2)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(S2(2,3,3); 0/2,2/3,2/3; -1/3)");
}

#[test]
fn unsupported_family_exits_two() {
    assert_eq!(seifert(&["quotient", "F1(m=1,n=1,r=1,s=1)"]).0, 2);
    assert_eq!(seifert(&["quotient", "--anti-hopf", "F11(m=1,n=1,r=1,s=1)"]).0, 2);
}

#[test]
fn validation_failures_exit_one() {
    let (code, out, _) = seifert(&["validate", "S2(2,2,3); 1/2,1/2,1/3; -1"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("violation"), "{out}");
    assert_eq!(seifert(&["classify", "S2(2,2,3); 1/2,1/2,1/3; -1"]).0, 1);
    assert_eq!(seifert(&["normalize", "T2(3)"]).0, 1);
}

#[test]
fn normalize_and_chi() {
    let (code, out, _) = seifert(&["normalize", "S2(2,2,3); 1/2,1/2,1/3; ; -4/3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(S2(2,2,3); 1/2,1/2,1/3; -4/3)");
    let (code, out, _) = seifert(&["chi", "D2(3;2)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("chi = "), "{out}");
}

#[test]
fn fibrations_of_an_infinite_class_print_a_key() {
    let (code, out, _) = seifert(&["fibrations", "S2(2,2); 0/2,0/2; ; -1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("infinite: "), "{out}");
    let (code, out, _) = seifert(&["lens", "S2(3,5); 1/3,2/5; -11/15"]);
    assert_eq!(code, 0);
    assert!(out.contains("classical"), "{out}");
}

#[test]
fn bridge_cap_is_configurable() {
    let args = ["classify", "S2(2,2,4); 0/2,0/2,2/4; ; -1/2"];
    let direct = seifert(&args).1;
    let flag = seifert(&["--max-bridge-b", "50", args[0], args[1]]).1;
    let env = Command::new(env!("CARGO_BIN_EXE_seifert"))
        .args(args)
        .env("SEIFERT_ATLAS_MAX_B", "50")
        .output()
        .unwrap();
    assert_eq!(direct, flag);
    assert_eq!(direct, String::from_utf8(env.stdout).unwrap());
    assert_ne!(seifert(&["--max-bridge-b", "lots", args[0], args[1]]).0, 0);
}

#[test]
fn atlas_out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atlas.jsonl");
    let p = path.to_str().unwrap();
    let (code, values) = json(&["atlas", "--max-order", "24", "--out", p]);
    assert_eq!(code, 0);
    let classes = values[0]["classes"].as_u64().unwrap();
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count() as u64, classes);
    for line in body.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(validator().is_valid(&v), "{v}");
    }
    let (_, stdout, _) = seifert(&["--json", "atlas", "--max-order", "24"]);
    assert_eq!(stdout, body);
}

#[test]
fn errors_are_schema_valid_json() {
    for args in [
        vec!["classify", "S2(2,2"],
        vec!["quotient", "F1(m=1,n=1,r=1,s=1)"],
        vec!["quotient", "F99(m=1)"],
        vec!["lens", "S2(2,3,5); 1/2,1/3,1/5; -1/30"],
    ] {
        let (code, values) = json(&args);
        assert_ne!(code, 0, "{args:?}");
        assert_eq!(values.len(), 1);
        assert!(values[0]["error"].is_string() && values[0]["kind"].is_string());
    }
}

#[test]
fn quotients_are_schema_valid() {
    for (src, f) in atlas::quotients(40).unwrap() {
        let group = src.group.to_string();
        let mut args = vec!["quotient", group.as_str()];
        if src.anti_hopf {
            args.push("--anti-hopf");
        }
        let (code, values) = json(&args);
        assert_eq!(code, 0);
        assert_eq!(values[0]["fibration"], Value::String(f.to_string()));
        let text = f.to_string();
        for command in ["validate", "normalize", "classify", "fibrations", "lens"] {
            json(&[command, &text]);
        }
        json(&["chi", &f.base().to_string()]);
    }
}

fn corpus() -> Vec<String> {
    let mut out = Vec::new();
    for b in 3..8 {
        out.extend(common::sweep(Surface::Sphere, &[2, 2, b], &[], 1));
        out.extend(common::sweep(Surface::Disk, &[b], &[], 1));
        out.extend(common::sweep(Surface::Disk, &[], &[2, 2, b], 1));
        out.extend(common::sweep(Surface::ProjectivePlane, &[b], &[], 1));
    }
    out.extend(common::sweep(Surface::Sphere, &[2, 3, 5], &[], 1));
    out.extend(common::sweep(Surface::Disk, &[3], &[2], 1));
    out.iter().map(ToString::to_string).collect()
}

fn tuple() -> impl Strategy<Value = String> {
    static CORPUS: OnceLock<Vec<String>> = OnceLock::new();
    let corpus = CORPUS.get_or_init(corpus);
    prop::sample::select(corpus.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_command_emits_schema_valid_json(f in tuple(), g in tuple()) {
        for command in ["validate", "normalize", "classify", "fibrations", "lens"] {
            let (code, _) = json(&[command, &f]);
            prop_assert!(code <= 1, "{command} {f}: exit {code}");
        }
        let (code, _) = json(&["diffeo", &f, &g]);
        prop_assert!(code == 0 || code == 3);
    }

    #[test]
    fn normalize_round_trips(f in tuple()) {
        let (code, out, _) = seifert(&["normalize", &f]);
        prop_assert_eq!(code, 0);
        prop_assert_eq!(out.trim(), f.as_str());
    }
}

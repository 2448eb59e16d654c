use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zzpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zzpa")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn save(dir: &Path, name: &str, o: &Output) -> String {
    let p = dir.join(name);
    std::fs::write(&p, &o.stdout).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn digit_poly_one_seventh() {
    let o = zzpa(&["digit-poly", "2", "1/7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["digit_poly"], serde_json::json!([1, -2, 0, 0, 0, 0, 0, -2, 1]));
    assert_eq!(v["closed_form_matches"], true);
}

#[test]
fn salem_one_decimal() {
    let o = zzpa(&["salem", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["salem"]["lambda_decimal"], "2.618033988750");
}

#[test]
fn exit_codes() {
    assert_eq!(zzpa(&["construct", "2", "2/2"]).status.code(), Some(2));
    assert_eq!(zzpa(&["construct", "1", "1/2"]).status.code(), Some(2));
    assert_eq!(zzpa(&["no-such-command"]).status.code(), Some(2));
    let bad = zzpa(&["digit-poly", "2", "x/y"]);
    assert_eq!(bad.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert!(err["error"]["kind"].is_string());

    let gpa = zzpa(&["check-pa", "--m", "2", "--poly=-1,-2,1"]);
    assert_eq!(gpa.status.code(), Some(0));
    let v = json(&gpa);
    assert_eq!(v["verdict"]["is_pa"], false);

    let pa = zzpa(&["check-pa", "2", "1/4"]);
    assert_eq!(pa.status.code(), Some(0));
    assert_eq!(json(&pa)["verdict"]["is_pa"], true);
}

#[test]
fn verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("construct.json", vec!["construct", "3", "2/5"]),
        ("limit.json", vec!["limit-set", "2", "1/4"]),
        ("salem.json", vec!["salem", "--range", "1..3"]),
    ] {
        let o = zzpa(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let path = save(dir.path(), name, &o);
        let v = zzpa(&["verify", &path]);
        assert_eq!(v.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&v.stderr));
    }

    let o = zzpa(&["construct", "2", "1/3"]);
    let mut v = json(&o);
    v["lambda"]["decimal"] = Value::String("9.000000000000".into());
    let path = dir.path().join("tampered.json");
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    assert_eq!(zzpa(&["verify", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let svg = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let a = zzpa(&["limit-set", "2", "1/4", "--svg", &svg("a.svg")]);
    let b = zzpa(&["limit-set", "2", "1/4", "--svg", &svg("b.svg")]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(svg("a.svg")).unwrap(), std::fs::read(svg("b.svg")).unwrap());
    let c1 = zzpa(&["salem", "--range", "1..4", "--csv"]);
    let c2 = zzpa(&["salem", "--range", "1..4", "--csv"]);
    assert_eq!(c1.stdout, c2.stdout);
    let csv = String::from_utf8(c1.stdout).unwrap();
    assert!(csv.starts_with("g,lambda,polynomial,is_salem,genus\n"));
    assert_eq!(csv.lines().count(), 5);
}

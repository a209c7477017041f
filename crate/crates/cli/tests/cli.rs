use std::path::Path;
use std::process::{Command, Output};

fn hetg2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hetg2")).args(args).output().expect("run hetg2")
}

fn json_of(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let path = dir.join(name);
    let mut all = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--json", p]);
    let out = hetg2(&all);
    (out.status.code().unwrap(), std::fs::read_to_string(&path).unwrap())
}

#[test]
fn heisenberg_passes_and_json_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (c1, a) = json_of(dir.path(), "a.json", &["verify", "--suite", "heisenberg"]);
    let (c2, b) = json_of(dir.path(), "b.json", &["verify", "--suite", "heisenberg"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["suite"], "heisenberg");
    let recs = v["records"].as_array().unwrap();
    let exact = recs.iter().find(|r| r["check_id"] == "heisenberg.exact_solution").unwrap();
    assert_eq!(exact["status"], "pass");
    assert_eq!(exact["parameters"]["alphap"], "1/12");
    for key in ["version", "suite", "records", "summary"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn su3_exits_zero_with_the_coefficient_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = json_of(dir.path(), "su3.json", &["verify", "--suite", "su3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let flagged: Vec<_> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "flagged" && r["check_id"].as_str().unwrap().contains("coefficient"))
        .collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn perturbed_slope_exits_one() {
    let out = hetg2(&["verify", "--suite", "all", "--params", "alphap=1/10"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("heisenberg.exact_solution")));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--suite", "nope"][..],
        &["verify", "--suite", "3ad", "--params", "alpha=1/0"],
        &["verify", "--suite", "3ad", "--params", "gamma=1"],
        &["verify", "--suite", "3ad", "--params", "delta=1"],
        &["verify"],
        &["frobnicate"],
        &["form", "no.such.form"],
    ] {
        assert_eq!(hetg2(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn list_runs_nothing() {
    let out = hetg2(&["verify", "--suite", "bianchi", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 5);
    assert!(text.lines().all(|l| l.starts_with("bianchi.")));
}

#[test]
fn forms_print() {
    let out = hetg2(&["form", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let names = String::from_utf8(out.stdout).unwrap();
    for name in names.lines() {
        let o = hetg2(&["form", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(!o.stdout.is_empty());
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

use regex::Regex;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nabla-ops")).args(args).output().expect("spawn nabla-ops")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_check_lines(text: &str) {
    let line = Regex::new(r"^CHECK\s+\S+\s+(PASS|FAIL)(\s+.*)?$").unwrap();
    assert!(!text.is_empty());
    for l in text.lines() {
        assert!(line.is_match(l), "malformed line {l:?}");
    }
}

#[test]
fn passing_suite_exits_zero() {
    let o = run(&["verify", "crossed", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_check_lines(&stdout(&o));
}

#[test]
fn left_zero_monoid_fails_with_its_witness() {
    let m = data("left_zero.json");
    let o = run(&["verify", "segal", "--n-max", "3", "--monoid", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_check_lines(&out);
    assert!(out.lines().any(|l| l.starts_with("CHECK commutativity FAIL witness=(a,b) ")), "{out}");
}

#[test]
fn z2_is_commutative() {
    let m = data("z2.json");
    let o = run(&["verify", "segal", "--n-max", "3", "--monoid", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("CHECK commutativity PASS") && l.ends_with("COMMUTATIVE")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "segal", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nope", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "roundtrip", "--n-max", "2"]).status.code(), Some(2));
}

#[test]
fn unknown_object_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"objects":["a"],"morphisms":[{"name":"id","inputs":["a"],"output":"c"}],"identities":{"a":"id"}}"#).unwrap();
    let o = run(&["verify", "roundtrip", "--n-max", "2", "--multicat", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("morphisms[0].output"), "{err}");
}

#[test]
fn dot_export_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let m = data("two_object.json");
    let mut outs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("w{i}.dot"));
        let o = run(&["build", "wreath", "--multicat", m.to_str().unwrap(), "--variant", "tildeG", "--n-max", "2", "--dot", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert_check_lines(&stdout(&o));
        outs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn tilde_e_at_level_one_has_two_objects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.dot");
    let m = data("terminal.json");
    let o = run(&["build", "wreath", "--multicat", m.to_str().unwrap(), "--variant", "tildeE", "--n-max", "1", "--dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph \"terminalwrtE\" {\n") && dot.ends_with("}\n"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 2);
}

#[test]
fn single_worker_gives_the_same_lines() {
    let many = run(&["verify", "closure", "--n-max", "3"]);
    let one = Command::new(env!("CARGO_BIN_EXE_nabla-ops"))
        .args(["verify", "closure", "--n-max", "3"])
        .env("NABLA_OPS_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&many), stdout(&one));
}

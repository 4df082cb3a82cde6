use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn ban(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ban")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn without_timings(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn eval_golden() {
    let out = ban(&["eval", path(&data("six_inputs.ban")), "--x", "101", "--i", "000010", "--delta", "{a,b}"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "011");
}

#[test]
fn eval_accepts_name_bit_lists() {
    let out = ban(&[
        "eval",
        path(&data("six_inputs.ban")),
        "--x",
        "a=1,b=0,c=1",
        "--i",
        "000010",
        "--delta",
        "{a,b}",
    ]);
    assert_eq!(stdout(&out).trim(), "011");
    let mixed = ban(&["eval", path(&data("six_inputs.ban")), "--x", "1,b=0,c=1", "--i", "000010", "--delta", "{a}"]);
    assert_eq!(mixed.status.code(), Some(2));
}

#[test]
fn missing_file_and_bad_usage_exit_2() {
    assert_eq!(ban(&["eval", "missing.ban", "--x", "1", "--delta", "{a}"]).status.code(), Some(2));
    assert_eq!(ban(&["eval"]).status.code(), Some(2));
    assert_eq!(ban(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn exec_prints_the_trace() {
    let out = ban(&["exec", path(&data("two_node.ban")), "--x", "00", "--mode", "{a};{b};{a,b}"]);
    assert_eq!(stdout(&out), "00\n10\n11\n01\n");
}

#[test]
fn json_reports_are_stable() {
    let file = data("six_inputs.ban");
    let args = ["--json", "eval", path(&file), "--x", "101", "--i", "000010", "--delta", "{a,b}"];
    let first = stdout(&ban(&args));
    let second = stdout(&ban(&args));
    let v = without_timings(&first);
    assert_eq!(v, without_timings(&second));
    assert_eq!(v["command"], "eval");
    assert_eq!(v["result"]["configuration"], "011");
    let strip = |t: &str| t.lines().filter(|l| !l.contains("total_ms")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&first), strip(&second));
}

#[test]
fn split_merge_and_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let m = data("partition_example.ban");
    let out = ban(&["split", path(&m), "--parts", "r:a,d/s:b/t:c", "-o", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["partition_example_r.ban", "partition_example_s.ban", "partition_example_t.ban", "manifest.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let merged = dir.path().join("merged.ban");
    let manifest = dir.path().join("manifest.json");
    assert_eq!(ban(&["merge", path(&manifest), "-o", path(&merged)]).status.code(), Some(0));
    let x = ["--json", "--x", "a=1,b=0,c=1,d=1", "--i", "1", "--delta", "{a,b,c,d}"];
    let pairs = |f: &Path| {
        let v = without_timings(&stdout(&ban(&[&["eval", path(f)][..], &x].concat())));
        let mut items: Vec<String> = v["result"]["assignments"].as_str().unwrap().split(',').map(String::from).collect();
        items.sort();
        items
    };
    assert_eq!(pairs(&m), pairs(&merged));
    let rt = ban(&["verify-roundtrip", path(&m), "--parts", "a/b/c,d"]);
    assert_eq!((rt.status.code(), stdout(&rt).trim().to_string()), (Some(0), "PASS".to_string()));
}

#[test]
fn wire_to_stdout_and_file() {
    let out = ban(&["wire", "--recursive", path(&data("partition_example.ban")), "--map", "e=a"]);
    assert!(stdout(&out).contains("node c : a"));
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("w.ban");
    let source = dir.path().join("src.ban");
    std::fs::write(&source, "node p : !q\nnode q : p\n").unwrap();
    let out = ban(&[
        "wire",
        "--non-recursive",
        path(&source),
        path(&data("six_inputs.ban")),
        "--map",
        "c1=p",
        "-o",
        path(&target),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!std::fs::read_to_string(&target).unwrap().contains("c1"));
}

#[test]
fn name_collisions_are_rejected() {
    let out = ban(&["wire", "--non-recursive", path(&data("two_node.ban")), path(&data("two_node.ban"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_writes_network_scheme_and_report() {
    let dir = tempfile::tempdir().unwrap();
    for to in ["clauses", "monotone"] {
        let out_dir = dir.path().join(to);
        let out = ban(&["transform", "--to", to, path(&data("clause_gadget.ban")), "-o", path(&out_dir)]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
        assert_eq!(report["verdict"], "PASS");
        let scheme = out_dir.join("scheme.json");
        assert_eq!(ban(&["check-sim", path(&scheme)]).status.code(), Some(0));
        assert_eq!(ban(&["check-local", path(&scheme), "--automaton", "a"]).status.code(), Some(0));
        let assembled = ban(&["assemble", path(&scheme)]);
        assert_eq!(stdout(&assembled), std::fs::read_to_string(out_dir.join("network.ban")).unwrap());
    }
}

#[test]
fn structural_scheme_fails_local_simulation_with_witness() {
    let out = ban(&["--json", "check-local", path(&data("four_parts/scheme.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let v = without_timings(&stdout(&out));
    assert_eq!(v["result"]["verdict"], "FAIL");
    assert!(v["witness"]["x"].as_str().unwrap().contains('='));
}

#[test]
fn search_with_identity_encoding() {
    let f = data("two_node.ban");
    let out = ban(&["check-sim", "--search", path(&f), path(&f), "--phi", path(&data("identity_phi.json")), "--maxlen", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS"));
}

#[test]
fn dynamics_of_the_signed_network() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("stg.dot");
    let report = dir.path().join("stg.json");
    let out = ban(&[
        "dynamics",
        path(&data("signed8.sban")),
        "--mode",
        "async",
        "--seed-pred",
        "a=1,d=1",
        "--dot",
        path(&dot),
        "--report",
        path(&report),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["fair"]["verdict"], "PASS");
    assert_eq!(r["fair"]["fixed_points"][0], "11011110");
    assert!(std::fs::read_to_string(&dot).unwrap().contains("\"11011110\" -> \"11011110\""));
    let parallel = ban(&["--json", "dynamics", path(&data("signed8.sban")), "--mode", "parallel"]);
    assert_eq!(without_timings(&stdout(&parallel))["result"]["nodes"], 256);
}

#[test]
fn negation_loop_does_not_converge() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("neg.ban");
    std::fs::write(&f, "node a : !a\n").unwrap();
    let out = ban(&["--json", "dynamics", path(&f), "--mode", "async"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(without_timings(&stdout(&out))["witness"]["cycle"].is_array());
}

#[test]
fn self_test_passes() {
    let out = ban(&["self-test", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS"));
}

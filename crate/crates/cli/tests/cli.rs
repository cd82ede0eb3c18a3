use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("prg").chain(args.iter().copied());
    let code = prg_cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (_, out, _) = run(&full);
    serde_json::from_str(&out).unwrap()
}

fn dot_counts(text: &str) -> (usize, usize) {
    let edges = text.lines().filter(|l| l.contains(" -- ")).count();
    let nodes = text.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains(" -- ")).count();
    (nodes, edges)
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["pauli", "table", "--set", "B"]).0, 0);
    assert_eq!(run(&["pauli", "table", "--set", "A"]).0, 1);
    assert_eq!(run(&["match", "--table", "9"]).0, 0);
    assert_eq!(run(&["shells"]).0, 0);
    assert_eq!(run(&["verify-all"]).0, 1);
    assert_eq!(run(&["line", "points", "--ring", "gf2x9"]).0, 2);
    assert_eq!(run(&["match", "--table", "5"]).0, 2);
    assert_eq!(run(&["mermin", "--square", "5"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn usage_errors_go_to_stderr() {
    let (code, out, err) = run(&["line", "points", "--ring", "gf2x9"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn dot_without_graph_is_a_usage_error() {
    assert_eq!(run(&["--format", "dot", "mermin"]).0, 2);
}

#[test]
fn cube_dot_shape() {
    let (code, out, _) = run(&["--format", "dot", "cube"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph "));
    assert_eq!(dot_counts(&out), (8, 12));
}

#[test]
fn nine_point_line_dot_shape() {
    let (code, out, _) = run(&["--format", "dot", "line", "graph", "--ring", "gf2x2"]);
    assert_eq!(code, 0);
    assert_eq!(dot_counts(&out), (9, 18));
}

fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(keys_sorted)
        }
        Value::Array(a) => a.iter().all(keys_sorted),
        _ => true,
    }
}

#[test]
fn json_is_sorted_and_stable() {
    for args in [&["pauli", "mubs"][..], &["mermin"], &["shells"], &["match", "--table", "8"], &["ring", "info", "--ring", "gf4"]] {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let first = run(&full).1;
        let second = run(&full).1;
        assert_eq!(first, second);
        assert!(first.ends_with('\n'));
        let v: Value = serde_json::from_str(&first).unwrap();
        assert!(keys_sorted(&v), "{args:?}");
    }
}

#[test]
fn mermin_json_phases() {
    let v = json(&["mermin", "--square", "1"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["payload"]["row_phases"], serde_json::json!(["+", "+", "+"]));
    assert_eq!(v["payload"]["col_phases"], serde_json::json!(["+", "+", "-"]));
}

#[test]
fn mubs_json() {
    let v = json(&["pauli", "mubs"]);
    assert_eq!(v["payload"]["pairs_checked"], 10);
    assert_eq!(v["payload"]["all_unbiased"], true);
    assert_eq!(v["payload"]["bases"].as_array().unwrap().len(), 5);
}

#[test]
fn match_nine_mismatches() {
    let v = json(&["match", "--table", "9"]);
    assert_eq!(v["payload"]["mismatch_count"], 14);
    assert_eq!(v["payload"]["flags_match"], true);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_prg")).args(["pauli", "table", "--set", "B"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_prg")).args(["ring", "info", "--ring", "gf9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixture_directory_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_prg"))
        .args(["pauli", "table", "--set", "B"])
        .env("PRG_FIXTURES", "/nonexistent/fixtures")
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
}

use std::process::{Command, Output};

fn geomon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geomon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn apply_worked_example() {
    let o = geomon(&["apply", "--family", "ALD", "--word", "S+e", "--term", "(x1*((x2 o x3)*x4))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "((x1*(x2 o x3))*(x1*x4))");
}

#[test]
fn undefined_application_fails() {
    let o = geomon(&["apply", "--word", "A+e", "--term", "(x1 o x2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "undefined");
}

#[test]
fn empty_operator() {
    let o = geomon(&["op", "--family", "ALD", "--word", "S+e S+1 S-e"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "empty");
    let o = geomon(&["op", "--json", "--word", "S+e S+1 S-e"]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap(), "empty");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(geomon(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(geomon(&["parse", "(x1*"]).status.code(), Some(2));
    assert_eq!(geomon(&["op", "--word", "Q+e"]).status.code(), Some(2));
    assert_eq!(geomon(&["--family", "XYZ", "op", "--word", "S+e"]).status.code(), Some(2));
}

#[test]
fn parse_json_round_trips() {
    let o = geomon(&["parse", "--json", "(x1 *((x2 o x3)* x4))"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["term"], "(x1*((x2 o x3)*x4))");
    assert_eq!(v["size"], 7);
    let again = geomon(&["parse", "--json", v["term"].as_str().unwrap()]);
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&again.stdout).unwrap(), v);
}

#[test]
fn orbit_reaches_associated_term() {
    let o = geomon(&["orbit", "--term", "(x*(x*x))", "--depth", "2"]);
    assert!(stdout(&o).lines().any(|l| l == "((x1 o x1)*x1)"));
}

#[test]
fn blueprint_prints_word_and_absorption() {
    let o = geomon(&["blueprint", "--json", "((x o x)*x)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["word"], "A+e S+e A-1");
    assert_eq!(v["p"], 1);
    assert_eq!(geomon(&["blueprint", "(x1*x2)"]).status.code(), Some(2));
}

#[test]
fn geq_certifies_or_reports_undecided() {
    let o = geomon(&["geq", "--json", "S+e S+1 S+e", "S+1 S+e S+1 S+0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["end"], "S+1 S+e S+1 S+0");
    let o = geomon(&["geq", "--bdot", "--budget", "10", "s1", "a1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("undecided"));
}

#[test]
fn bdot_operations() {
    assert_eq!(stdout(&geomon(&["bdot", "star", "s1", "1"])), "s1 s1 s2^-1");
    assert_eq!(stdout(&geomon(&["bdot", "circ", "1", "1"])), "a1");
    assert_eq!(stdout(&geomon(&["bdot", "shift", "s1 a2^-1"])), "s2 a3^-1");
}

#[test]
fn verify_blueprint_levels() {
    for level in ["op", "group"] {
        let o = geomon(&["verify-blueprint", "--level", level, "--size", "7"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("0 failures, 0 undecided"));
    }
}

#[test]
fn suite_passes() {
    let o = geomon(&["suite", "--family", "ALD", "--size", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 12);
}

#[test]
fn relations_and_presentation() {
    let o = geomon(&["relations", "--json", "--family", "LD", "--max-addr", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["kind"] == "commutation" || r["kind"] == "inheritance"));
    let o = geomon(&["present", "--family", "LD"]);
    assert!(stdout(&o).contains("critical"));
}

#[test]
fn common_multiples_and_expansions() {
    let o = geomon(&["--family", "LD", "crm", "S+e", "S+1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("S+e · "));
    let o = geomon(&["--family", "LD", "dexp", "--term", "(x1*(x2*x3))"]);
    assert_eq!(o.status.code(), Some(0));
    let o = geomon(&["--family", "LD", "expand", "--term", "(x1*(x2*x3))", "--degree", "1"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn family_file_is_loaded() {
    let dir = std::env::temp_dir().join(format!("geomon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("comm.json");
    std::fs::write(&path, r#"{"name": "C", "symbols": ["*"], "laws": [{"name": "C", "lhs": "(x1*x2)", "rhs": "(x2*x1)"}]}"#).unwrap();
    let o = geomon(&["--family-file", path.to_str().unwrap(), "apply", "--word", "C+e", "--term", "(x1*x2)"]);
    assert_eq!(stdout(&o), "(x2*x1)");
}

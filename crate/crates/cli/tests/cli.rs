use std::process::{Command, Output};

use serde_json::Value;

fn lampgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lampgroup"))
        .args(args)
        .env_remove("LAMPGROUP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn act_walks_the_table() {
    let o = lampgroup(&["act", "--group", "Z3", "--state", "a1", "--word", "0,2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1,0,0");
    let o = lampgroup(&["act", "--group", "Z2xZ2", "--state", "a(1,0)", "--word", "(0,1),(1,1)"]);
    assert_eq!(stdout(&o).trim(), "(1,1),(0,0)");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["act", "--group", "Z3", "--state", "a7", "--word", "0"][..],
        &["build", "--group", "Z1"],
        &["build"],
        &["build", "--group", "Z3", "--emit", "svg"],
        &["nonsense"],
        &["build", "--group", "Z3", "--cayley", "x.json"],
        &["cayley", "--table", "/nonexistent/table.json"],
    ] {
        assert_eq!(lampgroup(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn completeness_check() {
    let o = lampgroup(&["complex", "--group", "Z4", "--check-complete"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["complete"], false);
    assert_eq!(r["witness"]["vertical_label"], "a0");
    assert_eq!(r["witness"]["squares"], 2);
    let o = lampgroup(&["complex", "--group", "Z5", "--check-complete"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["defects"], serde_json::json!([]));
}

#[test]
fn build_dual_invert_minimize() {
    let built = json(&lampgroup(&["build", "--group", "Z3"]));
    assert_eq!(built["states"], serde_json::json!(["a0", "a1", "a2"]));
    let dual = json(&lampgroup(&["dual", "--group", "Z3"]));
    assert_eq!(dual["states"], serde_json::json!(["0", "1", "2"]));
    let inv = json(&lampgroup(&["invert", "--group", "Z3"]));
    assert_eq!(inv["states"].as_array().unwrap().len(), 3);
    let min = json(&lampgroup(&["minimize", "--group", "Z3"]));
    assert_eq!(min["states"].as_array().unwrap().len(), 3);
    let dot = stdout(&lampgroup(&["build", "--group", "Z2", "--emit", "dot"]));
    assert!(dot.starts_with("digraph"));
    let c = json(&lampgroup(&["build", "--group", "Z3", "--emit", "complex.json"]));
    assert_eq!(c["squares"].as_array().unwrap().len(), 9);
}

#[test]
fn automaton_file_input() {
    let dir = std::env::temp_dir().join(format!("lampgroup-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z3.json");
    std::fs::write(&path, stdout(&lampgroup(&["build", "--group", "Z3"]))).unwrap();
    let o = lampgroup(&["act", "--automaton", path.to_str().unwrap(), "--state", "a1", "--word", "0,2,1"]);
    assert_eq!(stdout(&o).trim(), "1,0,0");
    let table = dir.join("z2.json");
    std::fs::write(&table, r#"{"table": [[0, 1], [1, 0]]}"#).unwrap();
    let r = json(&lampgroup(&["cayley", "--table", table.to_str().unwrap()]));
    assert_eq!(r["order"], 2);
    assert_eq!(r["reversible"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn presentation_and_normalform() {
    let p = json(&lampgroup(&["presentation", "--group", "Z3"]));
    assert_eq!(p["generators"].as_array().unwrap().len(), 6);
    assert_eq!(p["relations"].as_array().unwrap().len(), 9);
    assert_eq!(p["cell_census"], serde_json::json!([1, 12, 9]));
    assert_eq!(p["hnn"]["associated_rank"], 7);
    let n = json(&lampgroup(&["normalform", "--group", "Z3", "--word", "a1 a2 a0^-1"]));
    assert_eq!(n["element"]["shift"], 1);
    assert_eq!(n["word"], "a1 a2 a0^-1");
    let n = json(&lampgroup(&["normalform", "--group", "Z3", "--element", r#"{"lamps":{"0":[2]},"shift":0}"#]));
    assert_eq!(n["word"], "a0^-1 a2");
}

#[test]
fn verify_exits_zero_and_is_reproducible() {
    let args = ["verify", "--group", "Z5", "--depth", "3", "--samples", "100", "--roundtrips", "20"];
    let a = lampgroup(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, lampgroup(&args).stdout);
    let r = json(&a);
    assert_eq!(r["verdict"], true);
    assert_eq!(r["params"]["seed"], 20_240_601);
    let seeded = Command::new(env!("CARGO_BIN_EXE_lampgroup"))
        .args(args)
        .env("LAMPGROUP_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(json(&seeded)["params"]["seed"], 9);
}

#[test]
fn cayley_symmetric_group() {
    let r = json(&lampgroup(&["cayley", "--symmetric", "3"]));
    assert_eq!(r["order"], 6);
    assert_eq!(r["reversible"], true);
    assert_eq!(r["abelian"], false);
}

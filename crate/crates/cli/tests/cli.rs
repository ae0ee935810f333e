mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{E4, E4_SIGMA, FULL, FULL_SIGMA};
use eqtree::treeauto::{isomorphic, TreeAutomaton};

fn eqtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqtree"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn build_to(dir: &Path, name: &str, sigma: &str, expr: &str, algo: &str) -> std::path::PathBuf {
    let out = dir.join(name);
    let o = eqtree(&[
        "build",
        "--alphabet",
        sigma,
        "--expr",
        expr,
        "--algo",
        algo,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn naive_build_of_a_constant() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_to(dir.path(), "a.json", "a/0", "a", "naive");
    let text = std::fs::read_to_string(&path).unwrap();
    let aut = TreeAutomaton::from_json(&text).unwrap();
    assert_eq!(aut.state_count(), 1);
    assert_eq!(aut.to_json(), text);
    assert_eq!(
        eqtree(&["member", "--aut", path.to_str().unwrap(), "--tree", "a"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn files_are_accepted_for_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let sigma = dir.path().join("sigma.txt");
    let expr = dir.path().join("e.txt");
    std::fs::write(&sigma, format!("{FULL_SIGMA}\n")).unwrap();
    std::fs::write(&expr, format!("{FULL}\n")).unwrap();
    let out = build_to(
        dir.path(),
        "full.json",
        sigma.to_str().unwrap(),
        expr.to_str().unwrap(),
        "fast",
    );
    let aut = TreeAutomaton::from_json(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(aut.state_count(), 6);
}

#[test]
fn membership_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_to(dir.path(), "full.json", FULL_SIGMA, FULL, "fast");
    let p = path.to_str().unwrap();
    let yes = eqtree(&["member", "--aut", p, "--tree", "h(h(a,g(a)),a)"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).contains("accepted"));
    let no = eqtree(&["member", "--aut", p, "--tree", "a"]);
    assert_eq!(no.status.code(), Some(3));
    assert!(stdout(&no).ends_with("rejected\n"));
    assert_eq!(
        eqtree(&["member", "--aut", p, "--tree", "h(a"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn fast_and_naive_outputs_are_isomorphic() {
    let dir = tempfile::tempdir().unwrap();
    let load = |p: std::path::PathBuf| {
        TreeAutomaton::from_json(&std::fs::read_to_string(p).unwrap()).unwrap()
    };
    let fast = load(build_to(dir.path(), "f.json", FULL_SIGMA, FULL, "fast"));
    let naive = load(build_to(dir.path(), "n.json", FULL_SIGMA, FULL, "naive"));
    assert!(isomorphic(&fast, &naive).unwrap());
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("e4.dot");
    let o = eqtree(&[
        "build",
        "--alphabet",
        E4_SIGMA,
        "--expr",
        E4,
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"states\""));
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn compare_passes_on_worked_examples_and_corpus() {
    let o = eqtree(&["compare", "--alphabet", E4_SIGMA, "--expr", E4]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("states fast=3 naive=3 isomorphic=true"));
    assert_eq!(
        eqtree(&["compare", "--alphabet", FULL_SIGMA, "--expr", FULL])
            .status
            .code(),
        Some(0)
    );
    let o = eqtree(&["compare", "--corpus", "20", "--max-nodes", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("corpus: 20 passed, 0 failed"));
    assert_eq!(eqtree(&["compare", "--expr", "a"]).status.code(), Some(1));
}

#[test]
fn enumeration() {
    let o = eqtree(&[
        "enum",
        "--alphabet",
        "c/0 g/1",
        "--expr",
        "g(c)*c",
        "--max-nodes",
        "3",
    ]);
    assert_eq!(stdout(&o), "c\ng(c)\ng(g(c))\n");
    let o = eqtree(&[
        "enum",
        "--alphabet",
        "a/0",
        "--expr",
        "a",
        "--max-nodes",
        "5",
    ]);
    assert_eq!(stdout(&o), "a\n");
}

#[test]
fn parse_errors_exit_one() {
    let o = eqtree(&[
        "enum",
        "--alphabet",
        "a/0 g/1",
        "--expr",
        "g(a,a)",
        "--max-nodes",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("arity"));
    assert_eq!(
        eqtree(&["build", "--alphabet", "a/0 a/0", "--expr", "a"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        eqtree(&["bench", "--family", "wide", "--sizes", "10"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_csv() {
    let o = eqtree(&["bench", "--family", "deep-product", "--sizes", "30"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,size,states,stage,micros");
    // The largest deep-product member within 30 nodes has 29.
    assert!(lines[1..].iter().all(|l| l.starts_with("deep-product,29,")));
    assert_eq!(lines.len(), 1 + 7);
    let o = eqtree(&[
        "bench",
        "--family",
        "nested-star",
        "--sizes",
        "41,21",
        "--algo",
        "both",
        "--format",
        "text",
    ]);
    assert!(stdout(&o).contains("sim_e 21 -> 41"));
}

#[test]
fn trace_sections() {
    let o = eqtree(&["build", "--alphabet", E4_SIGMA, "--expr", E4, "--trace"]);
    let text = stdout(&o);
    for s in [
        "gamma",
        "continuations",
        "follow",
        "psi",
        "words",
        "classes",
        "automaton",
    ] {
        assert!(text.contains(&format!("== {s}\n")), "{s}");
    }
    assert!(text.contains("f1^1 = 1 .a 6 .a 5"));
}

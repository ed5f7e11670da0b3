use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rwbal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwbal"))
        .args(args)
        .env_remove("RWBAL_WORKERS")
        .output()
        .expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = rwbal(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_graph_then_girth() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c1000.graph");
    ok_stdout(&["gen-graph", "--type", "cycle", "--n", "1000", "--out", p(&g)]);
    assert_eq!(ok_stdout(&["girth", p(&g)]).trim(), "1000");

    let pet = dir.path().join("p.graph");
    ok_stdout(&["gen-graph", "--type", "petersen", "--out", p(&pet)]);
    let check = json(&["girth", p(&pet), "--alpha", "0.6"]);
    assert_eq!(check["girth"], 5);
    assert_eq!(check["holds"], true);

    let rr = ok_stdout(&["gen-graph", "--type", "random-regular", "--n", "64", "--k", "3", "--seed", "5"]);
    assert_eq!(rr, ok_stdout(&["gen-graph", "--type", "random-regular", "--n", "64", "--k", "3", "--seed", "5"]));
}

#[test]
fn theory_bound_scheme1() {
    let r = json(&["theory-bound", "--scheme", "1", "--n", "1000000", "--c", "1"]);
    assert_eq!(r["i_star"], 8);
    assert_eq!(r["final_bound"], 10);
    let r = json(&["theory-bound", "--scheme", "2", "--n", "1e12", "--c", "1", "--k", "3", "--alpha", "0.25"]);
    assert_eq!(r["L"], 4);
    let out = rwbal(&["theory-bound", "--scheme", "2", "--n", "1e12", "--c", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c1000.graph");
    ok_stdout(&["gen-graph", "--type", "cycle", "--n", "1000", "--out", p(&g)]);
    let args = ["run", "--graph", p(&g), "--scheme", "rw-intersect-reset", "--rho", "15", "--seed", "42"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a["trace_digest"], b["trace_digest"]);
    assert_eq!(a["rho"], 15);
    assert_eq!(a["balls"], 1000);

    let trace = dir.path().join("trace.txt");
    let mut with_trace = args.to_vec();
    with_trace.extend(["--trace", p(&trace), "--balls", "20"]);
    ok_stdout(&with_trace);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 19);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(rwbal(&["run", "--bogus"]).status.code(), Some(1));
    assert_eq!(rwbal(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rwbal(&["girth", "/nonexistent/graph"]).status.code(), Some(1));
    let out = rwbal(&["run", "--graph", "x", "--scheme", "rw-intersect-reset", "--rho", "3", "--c", "1"]);
    assert_eq!(out.status.code(), Some(1), "rho flags are exclusive");
    assert_eq!(rwbal(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg,
        "graph=random-regular:4\nscheme=rw-intersect-reset\nscheme=rw-no-reset\nscheme=indep-uniform\nn=2^8\nn=2^9\nc=0.5\nc=1\ntrials=4\nmaster_seed=3\ncompute_girth=true\n",
    )
    .unwrap();
    let one = ok_stdout(&["sweep", "--config", p(&cfg), "--workers", "1"]);
    let eight = ok_stdout(&["sweep", "--config", p(&cfg), "--workers", "8"]);
    assert_eq!(one, eight);
    assert_eq!(one.lines().count(), 1 + 3 * 2 * 2 * 4);

    let out = dir.path().join("rows.csv");
    ok_stdout(&["sweep", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), one);

    let empty = dir.path().join("empty.cfg");
    std::fs::write(&empty, "graph=cycle\nn=100\ntrials=2\n").unwrap();
    let res = rwbal(&["sweep", "--config", p(&empty)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("no schemes"));
}

#[test]
fn verifiers() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = dir.path().join("k4.graph");
    ok_stdout(&["gen-graph", "--type", "complete", "--n", "4", "--out", p(&k4)]);
    let mix = json(&["verify-mixing", p(&k4), "--t-max", "30"]);
    assert!(mix["certificate"]["certified_t"].as_u64().is_some());
    assert_eq!(mix["analytic"]["mu_analytic"].as_array().unwrap().len(), 30);

    let ret = json(&["verify-return", p(&k4), "--alpha", "1"]);
    assert_eq!(ret["status"], "inapplicable");

    let a1 = json(&["check-assumption1", p(&k4), "--rho", "3", "--trials", "500", "--seed", "1"]);
    assert_eq!(a1["pass"], false);
    assert_eq!(a1["trials"], 500);

    let tail = json(&["tail-check", "--process", "markov", "--m", "0.1", "--n", "50", "--trials", "2000"]);
    assert_eq!(tail["all_ok"], true);
    let bad = rwbal(&["tail-check", "--m", "0.1", "--p", "0.2", "--n", "50", "--trials", "10"]);
    assert_eq!(bad.status.code(), Some(1));
}

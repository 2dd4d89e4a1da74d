use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bidsched_core::runtime::{trace_from_jsonl, RunSummary};
use bidsched_core::{Graph, SynthesisOutcome, Tender};
use tempfile::TempDir;

const FORK_A: &str = r#"{"vertices":["a","b","c","d","e","f","g"],"initial":"a",
 "edges":[["a","b"],["a","e"],["b","c"],["b","d"],["e","f"],["e","g"]]}"#;
const FORK_C: &str = r#"{"vertices":["a","b","c","d","e","f","g"],"initial":"a",
 "edges":[["a","b"],["a","e"],["b","c"],["b","d"],["b","f"],["e","f"],["e","g"]]}"#;
const SHUTTLE: &str = r#"{"vertices":["a","b","c","d"],"initial":"b",
 "edges":[["a","a"],["b","a"],["b","c"],["c","b"],["c","d"],["d","d"]]}"#;
const OBJ_1A: &str = r#"[{"kind":"reach","set":["c","d","g"]},{"kind":"reach","set":["d","f"]}]"#;
const OBJ_1B: &str = r#"[{"kind":"reach","set":["d","g"]},{"kind":"reach","set":["d","f"]}]"#;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, content).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_bidsched"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn solve_prints_a_sorted_table() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("o.json", OBJ_1A);
    let o = s.run(&["solve", "--graph", "g.json", "--objectives", "o.json", "--out", "out"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row_a = text.lines().find(|l| l.starts_with("a ")).unwrap();
    assert_eq!(row_a.split_whitespace().collect::<Vec<_>>(), ["a", "1/4", "1/2"]);
    assert!(s.path("out/thresholds_1.json").exists());
    assert!(s.path("out/manifest.json").exists());
}

#[test]
fn solve_handles_buchi_and_unreachable_targets() {
    let s = Sandbox::new();
    s.file("g.json", SHUTTLE);
    s.file("red.json", r#"{"kind":"buchi","set":["b","d"]}"#);
    let o = s.run(&["solve", "--graph", "g.json", "--objectives", "red.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["b", "2/3"]));

    s.file("h.json", r#"{"vertices":["x","y","t"],"initial":"x","edges":[["x","y"],["y","x"]]}"#);
    s.file("t.json", r#"{"kind":"reach","set":["t"]}"#);
    let o = s.run(&["solve", "--graph", "h.json", "--objectives", "t.json"]);
    let ones = stdout(&o).lines().skip(1).filter(|l| l.ends_with(" 1")).count();
    assert_eq!(ones, 2);
}

#[test]
fn synth_exit_codes_follow_the_outcome() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("o.json", OBJ_1B);
    let strong = s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--mode", "strong", "--out", "strong"]);
    assert_eq!(code(&strong), 1);
    let out = SynthesisOutcome::from_json(&read(s.path("strong/outcome.json"))).unwrap();
    assert_eq!((out.threshold_1.to_string(), out.threshold_2.to_string()), ("1/2".into(), "1/2".into()));

    let aa = s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--mode", "aa", "--out", "aa"]);
    assert_eq!(code(&aa), 0);
    let out = SynthesisOutcome::from_json(&read(s.path("aa/outcome.json"))).unwrap();
    assert_eq!((out.threshold_1.to_string(), out.threshold_2.to_string()), ("1/4".into(), "1/4".into()));
    assert!(s.path("aa/tender_1.json").exists() && s.path("aa/tender_2.json").exists());
}

#[test]
fn synth_with_contract() {
    let s = Sandbox::new();
    s.file("g.json", FORK_C);
    s.file("o.json", OBJ_1A);
    s.file("c.json", r#"{"forbidden_1":["c"],"forbidden_2":["f"]}"#);
    let o = s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--mode", "ag", "--contract", "c.json"]);
    assert_eq!(code(&o), 0);
    let o = s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--mode", "ag"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_and_pruning_errors() {
    let s = Sandbox::new();
    s.file("bad.json", r#"{"vertices":["a"],"initial":"z","edges":[]}"#);
    s.file("o.json", OBJ_1A);
    assert_eq!(code(&s.run(&["synth", "--graph", "bad.json", "--objectives", "o.json"])), 2);
    s.file("g.json", FORK_A);
    s.file("one.json", r#"[{"kind":"reach","set":["d"]}]"#);
    assert_eq!(code(&s.run(&["synth", "--graph", "g.json", "--objectives", "one.json"])), 2);
    s.file("unknown.json", r#"[{"kind":"reach","set":["q"]},{"kind":"reach","set":["d"]}]"#);
    assert_eq!(code(&s.run(&["synth", "--graph", "g.json", "--objectives", "unknown.json"])), 2);
    s.file("p.json", r#"{"vertices":["s","t"],"initial":"s","edges":[["s","s"]]}"#);
    s.file("pt.json", r#"[{"kind":"reach","set":["t"]},{"kind":"reach","set":["t"]}]"#);
    assert_eq!(code(&s.run(&["synth", "--graph", "p.json", "--objectives", "pt.json", "--mode", "aa"])), 4);
    assert_eq!(code(&s.run(&["solve", "--graph", "g.json", "--objectives", "o.json", "--tolerance", "-1"])), 2);
}

#[test]
fn simulate_fork_a_pair_reaches_d() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("o.json", OBJ_1A);
    assert_eq!(code(&s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--out", "syn"])), 0);
    let o = s.run(&[
        "simulate", "--graph", "g.json", "--tender", "syn/tender_1.json", "--tender", "syn/tender_2.json",
        "--objectives", "o.json", "--out", "sim", "--emit-dot",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = RunSummary::from_json(&read(s.path("sim/summary.json"))).unwrap();
    assert_eq!(summary.final_vertex, "d");
    assert!(stdout(&o).contains("objective 1: satisfied") && stdout(&o).contains("objective 2: satisfied"));
    let dot = read(s.path("sim/graph.dot"));
    assert!(dot.contains("plum") && dot.contains("penwidth=3"));
    assert!(read(s.path("sim/trace.csv")).starts_with("step,vertex,bid1,bid2,winner,budget1\n"));
    assert!(read(s.path("sim/budget.csv")).lines().count() >= 3);
}

#[test]
fn spoiler_violates_blue_on_fork_b() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("blue.json", r#"{"kind":"reach","set":["d","g"]}"#);
    assert_eq!(code(&s.run(&["solve", "--graph", "g.json", "--objectives", "blue.json", "--out", "solved"])), 0);
    let o = s.run(&[
        "simulate", "--graph", "g.json", "--tender", "solved/tender_1.json", "--objectives", "blue.json",
        "--adversary", "spoiler", "--split", "49/100", "--out", "sim",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("objective 1: violated"), "{}", stdout(&o));
}

#[test]
fn seeded_simulation_is_byte_identical() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("o.json", OBJ_1A);
    s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--out", "syn"]);
    for out in ["one", "two"] {
        let o = s.run(&[
            "simulate", "--graph", "g.json", "--tender", "syn/tender_1.json", "--adversary", "random",
            "--seed", "42", "--objectives", "o.json", "--out", out,
        ]);
        assert_eq!(code(&o), 0);
    }
    for f in ["trace.jsonl", "trace.csv", "budget.csv", "summary.json"] {
        assert_eq!(read(s.path("one").join(f)), read(s.path("two").join(f)), "{f}");
    }
}

#[test]
fn mismatched_tender_is_an_input_error() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("o.json", OBJ_1A);
    s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--out", "syn"]);
    s.file("other.json", SHUTTLE);
    let o = s.run(&["simulate", "--graph", "other.json", "--tender", "syn/tender_1.json", "--tender", "syn/tender_2.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn emitted_json_round_trips() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("o.json", OBJ_1A);
    s.run(&["synth", "--graph", "g.json", "--objectives", "o.json", "--out", "syn"]);
    s.run(&[
        "simulate", "--graph", "g.json", "--tender", "syn/tender_1.json", "--tender", "syn/tender_2.json", "--out", "sim",
    ]);
    let t = read(s.path("syn/tender_1.json"));
    assert_eq!(Tender::from_json(&t).unwrap().to_json(), t);
    let trace = read(s.path("sim/trace.jsonl"));
    assert_eq!(bidsched_core::runtime::trace_jsonl(&trace_from_jsonl(&trace).unwrap()), trace);
    let out = read(s.path("syn/outcome.json"));
    assert_eq!(SynthesisOutcome::from_json(&out).unwrap().to_json(), out);
}

#[test]
fn grid_corridor_goes_straight() {
    let s = Sandbox::new();
    s.file(
        "spec.json",
        r#"{"rows":1,"cols":3,"start":[0,0],"targets_1":[[0,2]],"targets_2":[[0,2]]}"#,
    );
    let o = s.run(&["grid", "--spec", "spec.json", "--out", "grid"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("path: r0c0 r0c1 r0c2"), "{}", stdout(&o));
    let g = Graph::from_json(&read(s.path("grid/graph.json"))).unwrap();
    assert_eq!(g.len(), 3);
    let cells = read(s.path("grid/cells.csv"));
    assert!(cells.contains("0,0,r0c0,start,true,0,"));
    assert!(read(s.path("grid/grid.dot")).contains("pos="));
}

#[test]
fn grid_generator_is_stable() {
    let s = Sandbox::new();
    let args = |out: &'static str| ["grid", "--rows", "8", "--cols", "8", "--density", "0.15", "--seed", "7", "--out", out];
    let a = s.run(&args("a"));
    let b = s.run(&args("b"));
    assert_eq!(code(&a), code(&b));
    for f in ["grid.json", "graph.json", "outcome.json", "cells.csv"] {
        assert_eq!(read(s.path("a").join(f)), read(s.path("b").join(f)), "{f}");
    }
}

#[test]
fn grid_with_unreachable_red_target_fails() {
    let s = Sandbox::new();
    s.file(
        "spec.json",
        r#"{"rows":2,"cols":3,"start":[0,0],"obstacles":[[0,1],[1,1]],"targets_1":[[1,0]],"targets_2":[[1,2]]}"#,
    );
    let o = s.run(&["grid", "--spec", "spec.json", "--out", "grid"]);
    assert_eq!(code(&o), 1);
    let out = SynthesisOutcome::from_json(&read(s.path("grid/outcome.json"))).unwrap();
    assert_eq!(out.threshold_2.to_string(), "1");
    s.file("blocked.json", r#"{"rows":1,"cols":2,"start":[0,0],"obstacles":[[0,0]],"targets_1":[[0,1]],"targets_2":[[0,1]]}"#);
    assert_eq!(code(&s.run(&["grid", "--spec", "blocked.json"])), 2);
}

#[test]
fn iterative_mode_solves() {
    let s = Sandbox::new();
    s.file("g.json", FORK_A);
    s.file("o.json", OBJ_1A);
    let o = s.run(&["solve", "--iterative", "--graph", "g.json", "--objectives", "o.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["a", "1/4", "1/2"]));
}

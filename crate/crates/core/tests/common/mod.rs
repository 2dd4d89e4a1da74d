//! Graphs from the worked examples, shared by the integration tests.
#![allow(dead_code)]

use bidsched_core::{Graph, Objective};

pub fn fork(extra_bf: bool) -> Graph {
    let mut edges = vec![("a", "b"), ("a", "e"), ("b", "c"), ("b", "d"), ("e", "f"), ("e", "g")];
    if extra_bf {
        edges.push(("b", "f"));
    }
    Graph::from_edges(&["a", "b", "c", "d", "e", "f", "g"], "a", &edges).unwrap()
}

/// Blue and red objectives of fork A.
pub fn fork_a_objectives() -> (Objective, Objective) {
    (Objective::reach(["c", "d", "g"]), Objective::reach(["d", "f"]))
}

pub fn fork_b_objectives() -> (Objective, Objective) {
    (Objective::reach(["d", "g"]), Objective::reach(["d", "f"]))
}

pub fn shuttle() -> Graph {
    Graph::from_edges(
        &["a", "b", "c", "d"],
        "b",
        &[("a", "a"), ("b", "a"), ("b", "c"), ("c", "b"), ("c", "d"), ("d", "d")],
    )
    .unwrap()
}

/// Red and blue Büchi objectives of the shuttle graph.
pub fn shuttle_objectives() -> (Objective, Objective) {
    (Objective::buchi(["b", "d"]), Objective::buchi(["a", "c"]))
}

/// A three-vertex strongly connected graph with a Büchi objective per side.
pub fn scc_buchi() -> (Graph, Objective, Objective) {
    let g = Graph::from_edges(&["x", "y", "z"], "x", &[("x", "y"), ("y", "z"), ("z", "x"), ("y", "x")]).unwrap();
    (g, Objective::buchi(["x"]), Objective::buchi(["z"]))
}

/// A reachability game with a cycle `s <-> p`; thresholds are 1/3 each.
pub fn cyclic_reach() -> (Graph, Objective, Objective) {
    let g = Graph::from_edges(
        &["s", "p", "q", "t", "w1", "w2"],
        "s",
        &[("s", "p"), ("s", "q"), ("p", "s"), ("p", "t"), ("q", "w1"), ("q", "w2")],
    )
    .unwrap();
    (g, Objective::reach(["t", "w1"]), Objective::reach(["t", "w2"]))
}

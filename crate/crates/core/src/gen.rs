//! Seeded random instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::objective::Objective;

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub vertices: usize,
    /// Fraction of vertices turned into sinks (at least two).
    pub sink_fraction: f64,
    /// Probability that a non-sink has a single successor.
    pub p_unary: f64,
    /// Probability that a non-sink has three successors.
    pub p_ternary: f64,
}

impl GenParams {
    pub fn binary(vertices: usize) -> Self {
        GenParams {
            vertices,
            sink_fraction: 0.25,
            p_unary: 0.15,
            p_ternary: 0.0,
        }
    }

    pub fn mixed(vertices: usize) -> Self {
        GenParams {
            p_ternary: 0.1,
            ..Self::binary(vertices)
        }
    }
}

/// A random graph on `v0 .. v{n-1}` with initial vertex `v0`; sinks are the
/// last vertices.
pub fn random_graph(seed: u64, params: &GenParams) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.vertices.max(3);
    let sinks = ((n as f64 * params.sink_fraction).round() as usize).clamp(2, n - 1);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let succ = (0..n)
        .map(|v| {
            if v >= n - sinks {
                return Vec::new();
            }
            let r: f64 = rng.gen();
            let deg = if r < params.p_unary {
                1
            } else if r < params.p_unary + params.p_ternary {
                3
            } else {
                2
            };
            sample(&mut rng, n, deg.min(n)).into_vec()
        })
        .collect();
    Graph::from_parts(names, succ, 0)
}

/// A random graph with two overlapping reachability objectives over sinks.
pub fn random_instance(seed: u64, params: &GenParams) -> (Graph, Objective, Objective) {
    let graph = random_graph(seed, params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let sinks: Vec<usize> = (0..graph.len()).filter(|&v| graph.is_sink(v)).collect();
    let shared = sinks[rng.gen_range(0..sinks.len())];
    let mut t1 = vec![graph.name(shared).to_string()];
    let mut t2 = t1.clone();
    for &s in &sinks {
        if s == shared {
            continue;
        }
        match rng.gen_range(0..4) {
            0 => t1.push(graph.name(s).to_string()),
            1 => t2.push(graph.name(s).to_string()),
            2 => {
                t1.push(graph.name(s).to_string());
                t2.push(graph.name(s).to_string());
            }
            _ => {}
        }
    }
    (graph, Objective::reach(t1), Objective::reach(t2))
}

//! Three-copy product that turns two reachability objectives with arbitrary
//! targets into objectives whose targets are sinks.
//!
//! Copy `⊥` means neither objective has been met, copy `1` (resp. `2`) means
//! only the first (resp. second) has. A product vertex is a sink as soon as
//! both objectives are met. The targets of objective `i` in the product are
//! the sinks whose accumulated progress includes `i`. Product vertices are
//! named `<orig>@⊥`, `<orig>@1`, `<orig>@2`.

use crate::error::ObjectiveError;
use crate::graph::Graph;
use crate::objective::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Bottom,
    First,
    Second,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Bottom, Layer::First, Layer::Second];

    fn suffix(self) -> &'static str {
        match self {
            Layer::Bottom => "⊥",
            Layer::First => "1",
            Layer::Second => "2",
        }
    }

    fn progress(self) -> (bool, bool) {
        match self {
            Layer::Bottom => (false, false),
            Layer::First => (true, false),
            Layer::Second => (false, true),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sinkified {
    pub graph: Graph,
    pub objective_1: Objective,
    pub objective_2: Objective,
    /// Product vertex index -> (original vertex index, copy).
    pub origin: Vec<(usize, Layer)>,
}

impl Sinkified {
    pub fn product_index(&self, original: usize, copy: Layer) -> usize {
        copy_offset(copy) * (self.origin.len() / 3) + original
    }

    pub fn original_name<'g>(&self, original_graph: &'g Graph, product_vertex: usize) -> &'g str {
        original_graph.name(self.origin[product_vertex].0)
    }
}

fn copy_offset(c: Layer) -> usize {
    match c {
        Layer::Bottom => 0,
        Layer::First => 1,
        Layer::Second => 2,
    }
}

pub fn product_name(orig: &str, copy: Layer) -> String {
    format!("{orig}@{}", copy.suffix())
}

pub fn sinkify(
    graph: &Graph,
    reach_1: &Objective,
    reach_2: &Objective,
) -> Result<Sinkified, ObjectiveError> {
    let t1 = reach_1.reach_mask(graph)?;
    let t2 = reach_2.reach_mask(graph)?;
    let n = graph.len();

    // Progress after standing on `v` in copy `c`.
    let effective = |v: usize, c: Layer| -> (bool, bool) {
        let (p1, p2) = c.progress();
        (p1 || t1[v], p2 || t2[v])
    };
    // Copy entered when moving onto `u` with progress `(p1, p2)` so far.
    let enter = |u: usize, (p1, p2): (bool, bool)| -> Layer {
        let (q1, q2) = (p1 || t1[u], p2 || t2[u]);
        match (p1, p2, q1, q2) {
            (true, false, _, _) => Layer::First,
            (false, true, _, _) => Layer::Second,
            (false, false, true, false) => Layer::First,
            (false, false, false, true) => Layer::Second,
            _ => Layer::Bottom,
        }
    };

    let mut names = Vec::with_capacity(3 * n);
    let mut origin = Vec::with_capacity(3 * n);
    for c in Layer::ALL {
        for v in 0..n {
            names.push(product_name(graph.name(v), c));
            origin.push((v, c));
        }
    }
    let mut succ = vec![Vec::new(); 3 * n];
    let mut targets_1 = Vec::new();
    let mut targets_2 = Vec::new();
    for (idx, &(v, c)) in origin.iter().enumerate() {
        let eff = effective(v, c);
        if (eff.0 && eff.1) || graph.is_sink(v) {
            if eff.0 {
                targets_1.push(names[idx].clone());
            }
            if eff.1 {
                targets_2.push(names[idx].clone());
            }
            continue;
        }
        succ[idx] = graph
            .successors(v)
            .iter()
            .map(|&u| copy_offset(enter(u, eff)) * n + u)
            .collect();
    }

    Ok(Sinkified {
        graph: Graph::from_parts(names, succ, graph.initial()),
        objective_1: Objective::reach(targets_1),
        objective_2: Objective::reach(targets_2),
        origin,
    })
}

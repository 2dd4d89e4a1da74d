//! Threshold budgets of bidding games.
//!
//! Every solver here reduces to one game: the minimizer wants to reach a set
//! of absorbing winning vertices (value 0), avoiding absorbing losing ones
//! (value 1); vertices that cannot reach a winning vertex are pinned at 1 and
//! the rest satisfy `th(v) = ½(max_succ th + min_succ th)`.

mod exact;
mod iterative;
mod linear;
mod oracle;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ObjectiveError, SolverError};
use crate::graph::Graph;
use crate::objective::Objective;
use crate::rational::{self, half, Rational};
use crate::scc::scc_decompose;
use crate::sinkify::{sinkify, Layer};

pub use iterative::Sweeps;
pub use oracle::{brute_force_oracle, ORACLE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub mode: Mode,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Exact,
            tolerance: 1e-9,
            max_iterations: 100_000,
        }
    }
}

impl SolverConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn iterative() -> Self {
        SolverConfig {
            mode: Mode::Iterative,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(SolverError::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-vertex thresholds with their witnessing successors.
///
/// `witness[v] = (v_minus, v_plus)` for every non-absorbing vertex with
/// successors. `targets` lists the absorbing vertices of value 0, and
/// `rank[v]` is the length of the shortest path to them along successors of
/// minimal value (present whenever `values[v] < 1`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdMap {
    #[serde(with = "rational::serde_map")]
    pub values: BTreeMap<String, Rational>,
    pub witness: BTreeMap<String, (String, String)>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub targets: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rank: BTreeMap<String, u32>,
}

impl ThresholdMap {
    pub fn value(&self, v: &str) -> Option<&Rational> {
        self.values.get(v)
    }

    pub fn v_minus(&self, v: &str) -> Option<&str> {
        self.witness.get(v).map(|(m, _)| m.as_str())
    }

    pub fn v_plus(&self, v: &str) -> Option<&str> {
        self.witness.get(v).map(|(_, p)| p.as_str())
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("threshold map serializes")
    }

    /// Dense value vector in the vertex order of `graph`.
    pub fn dense(&self, graph: &Graph) -> Result<Vec<Rational>, ObjectiveError> {
        graph
            .names()
            .iter()
            .map(|v| {
                self.values
                    .get(v)
                    .cloned()
                    .ok_or_else(|| ObjectiveError::UnknownVertex(v.clone()))
            })
            .collect()
    }

    /// Checks range, witness optimality and the averaging equation; returns
    /// a description of the first violation.
    pub fn check(&self, graph: &Graph) -> Result<(), String> {
        let x = self.dense(graph).map_err(|e| e.to_string())?;
        for v in 0..graph.len() {
            if !rational::in_unit_interval(&x[v]) {
                return Err(format!("{} has value {} outside [0,1]", graph.name(v), x[v]));
            }
        }
        for (v, (lo, hi)) in &self.witness {
            let vi = graph.index_of(v).ok_or(format!("unknown vertex {v}"))?;
            let li = graph.index_of(lo).ok_or(format!("unknown vertex {lo}"))?;
            let hi_ = graph.index_of(hi).ok_or(format!("unknown vertex {hi}"))?;
            let succ = graph.successors(vi);
            if !succ.contains(&li) || !succ.contains(&hi_) {
                return Err(format!("witness of {v} is not a successor"));
            }
            let min = succ.iter().map(|&u| &x[u]).min().expect("non-empty");
            let max = succ.iter().map(|&u| &x[u]).max().expect("non-empty");
            if &x[li] != min || &x[hi_] != max {
                return Err(format!("witness of {v} is not optimal"));
            }
            if x[vi] != (min + max) * half() {
                return Err(format!("averaging equation fails at {v}"));
            }
        }
        Ok(())
    }
}

/// Values pinned before solving: winning vertices at 0, losing ones and
/// vertices that cannot reach a winning vertex at 1.
fn pinned(graph: &Graph, win: &[bool], lose: &[bool]) -> Vec<Option<bool>> {
    let absorbing: Vec<bool> = win.iter().zip(lose).map(|(w, l)| *w || *l).collect();
    let hopeful = graph.with_sinks(&absorbing).reachable_to_mask(win);
    (0..graph.len())
        .map(|v| {
            if win[v] {
                Some(true)
            } else if lose[v] || !hopeful[v] {
                Some(false)
            } else {
                None
            }
        })
        .collect()
}

fn solve_game(graph: &Graph, win: &[bool], lose: &[bool], config: &SolverConfig) -> Result<Vec<Rational>, SolverError> {
    config.validate()?;
    let pins = pinned(graph, win, lose);
    match config.mode {
        Mode::Exact => {
            let fixed: Vec<Option<Rational>> = pins
                .iter()
                .map(|p| p.map(|w| if w { Rational::zero() } else { Rational::one() }))
                .collect();
            Ok(exact::solve(graph, &fixed))
        }
        Mode::Iterative => {
            let fixed: Vec<Option<f64>> = pins.iter().map(|p| p.map(|w| if w { 0.0 } else { 1.0 })).collect();
            let mut sweeps = Sweeps::new(graph, fixed);
            // The residual test certifies convergence; the remaining budget
            // polishes until the monotone float sequence stops moving.
            let mut residual = f64::INFINITY;
            let mut converged = false;
            for _ in 0..config.max_iterations {
                let (_, r) = sweeps.next().expect("sweeps are endless");
                residual = r;
                converged |= residual < config.tolerance;
                if residual == 0.0 {
                    break;
                }
            }
            if !converged {
                return Err(SolverError::NotConverged {
                    iterations: config.max_iterations,
                    residual,
                });
            }
            Ok(sweeps
                .current()
                .iter()
                .zip(&pins)
                .map(|(&x, p)| match p {
                    Some(true) => Rational::zero(),
                    Some(false) => Rational::one(),
                    None => rational::from_f64(x),
                })
                .collect())
        }
    }
}

/// Shortest-path ranks to `win` along minimal-value successors.
fn min_edge_ranks(graph: &Graph, x: &[Rational], win: &[bool], absorbing: &[bool]) -> Vec<Option<u32>> {
    let n = graph.len();
    let mut rank = vec![None; n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let one = Rational::one();
    for v in 0..n {
        if absorbing[v] || graph.is_sink(v) || x[v] >= one {
            continue;
        }
        let min = graph.successors(v).iter().map(|&u| &x[u]).min().expect("non-sink");
        for &u in graph.successors(v) {
            if &x[u] == min {
                pred[u].push(v);
            }
        }
    }
    let mut queue = VecDeque::new();
    for v in 0..n {
        if win[v] {
            rank[v] = Some(0);
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        let r = rank[u].expect("queued vertices are ranked");
        for &v in &pred[u] {
            if rank[v].is_none() {
                rank[v] = Some(r + 1);
                queue.push_back(v);
            }
        }
    }
    rank
}

fn build_map(graph: &Graph, x: &[Rational], win: &[bool], lose: &[bool]) -> ThresholdMap {
    let absorbing: Vec<bool> = win.iter().zip(lose).map(|(w, l)| *w || *l).collect();
    let rank = min_edge_ranks(graph, x, win, &absorbing);
    let mut map = ThresholdMap::default();
    for v in 0..graph.len() {
        let name = graph.name(v).to_string();
        map.values.insert(name.clone(), x[v].clone());
        if let Some(r) = rank[v] {
            map.rank.insert(name.clone(), r);
        }
        if win[v] {
            map.targets.insert(name.clone());
        }
        if absorbing[v] || graph.is_sink(v) {
            continue;
        }
        let succ = graph.successors(v);
        let mut hi = succ[0];
        let mut lo = succ[0];
        for &u in &succ[1..] {
            if x[u] > x[hi] {
                hi = u;
            }
            let better_rank = match (rank[u], rank[lo]) {
                (Some(a), Some(b)) => a < b,
                (Some(_), None) => true,
                _ => false,
            };
            if x[u] < x[lo] || (x[u] == x[lo] && better_rank) {
                lo = u;
            }
        }
        map.witness.insert(name, (graph.name(lo).to_string(), graph.name(hi).to_string()));
    }
    map
}

fn names_to_mask(graph: &Graph, set: &BTreeSet<String>) -> Result<Vec<bool>, ObjectiveError> {
    let mut m = vec![false; graph.len()];
    for v in set {
        m[graph.index_of(v).ok_or_else(|| ObjectiveError::UnknownVertex(v.clone()))?] = true;
    }
    Ok(m)
}

/// Reachability thresholds; every target must be a sink.
pub fn solve_reach(graph: &Graph, targets: &BTreeSet<String>, config: &SolverConfig) -> Result<ThresholdMap, SolverError> {
    let win = names_to_mask(graph, targets)?;
    if let Some(t) = (0..graph.len()).find(|&v| win[v] && !graph.is_sink(v)) {
        return Err(SolverError::NonSinkTarget(graph.name(t).to_string()));
    }
    let lose = vec![false; graph.len()];
    let x = solve_game(graph, &win, &lose, config)?;
    Ok(build_map(graph, &x, &win, &lose))
}

/// Reachability thresholds for targets that need not be sinks: the game is
/// solved on the product that remembers a visit to the target set, and the
/// result is read off its first copy.
pub fn solve_reach_general(graph: &Graph, objective: &Objective, config: &SolverConfig) -> Result<ThresholdMap, SolverError> {
    let s = sinkify(graph, objective, objective)?;
    let targets = match &s.objective_1 {
        Objective::Reach { set } => set.clone(),
        _ => unreachable!("sinkify yields reach objectives"),
    };
    let product = solve_reach(&s.graph, &targets, config)?;
    let target_mask = objective.reach_mask(graph)?;

    let mut map = ThresholdMap::default();
    for v in 0..graph.len() {
        let name = graph.name(v);
        let pname = s.graph.name(s.product_index(v, Layer::Bottom));
        map.values.insert(name.to_string(), product.values[pname].clone());
        if let Some(&r) = product.rank.get(pname) {
            map.rank.insert(name.to_string(), r);
        }
        if target_mask[v] {
            map.targets.insert(name.to_string());
        }
        if let Some((lo, hi)) = product.witness.get(pname) {
            let back = |p: &str| s.original_name(graph, s.graph.index_of(p).expect("product vertex")).to_string();
            map.witness.insert(name.to_string(), (back(lo), back(hi)));
        }
    }
    Ok(map)
}

/// Thresholds for staying inside the safe set forever.
pub fn solve_safety(graph: &Graph, objective: &Objective, config: &SolverConfig) -> Result<ThresholdMap, SolverError> {
    let safe = match objective {
        Objective::Safety { .. } => objective.set_mask(graph)?,
        other => {
            return Err(ObjectiveError::WrongKind {
                expected: "safety",
                found: other.kind_name(),
            }
            .into())
        }
    };
    let lose: Vec<bool> = safe.iter().map(|s| !s).collect();
    let can_fail = graph.with_sinks(&lose).reachable_to_mask(&lose);
    let win: Vec<bool> = can_fail.iter().map(|c| !c).collect();
    let x = solve_game(graph, &win, &lose, config)?;
    Ok(build_map(graph, &x, &win, &lose))
}

/// Bottom components split by the max-even rule. Sinks count as bottom
/// components with an implicit self-loop.
pub fn classify_bottoms(graph: &Graph, colors: &[u32]) -> (Vec<bool>, Vec<bool>) {
    let scc = scc_decompose(graph);
    let mut good = vec![false; graph.len()];
    let mut bad = vec![false; graph.len()];
    for comp in scc.bottoms() {
        let top = comp.iter().map(|&v| colors[v]).max().expect("non-empty component");
        for &v in comp {
            if top % 2 == 0 {
                good[v] = true;
            } else {
                bad[v] = true;
            }
        }
    }
    (good, bad)
}

/// Parity (and Büchi) thresholds: 0 or 1 inside bottom components, reach
/// thresholds towards the good ones elsewhere.
pub fn solve_parity(graph: &Graph, objective: &Objective, config: &SolverConfig) -> Result<ThresholdMap, SolverError> {
    let colors = objective.parity_colors(graph)?;
    let (win, lose) = classify_bottoms(graph, &colors);
    let x = solve_game(graph, &win, &lose, config)?;
    Ok(build_map(graph, &x, &win, &lose))
}

pub fn solve_objective(graph: &Graph, objective: &Objective, config: &SolverConfig) -> Result<ThresholdMap, SolverError> {
    match objective {
        Objective::Reach { set } => {
            let mask = objective.reach_mask(graph)?;
            if (0..graph.len()).all(|v| !mask[v] || graph.is_sink(v)) {
                solve_reach(graph, set, config)
            } else {
                solve_reach_general(graph, objective, config)
            }
        }
        Objective::Safety { .. } => solve_safety(graph, objective, config),
        Objective::Buchi { .. } | Objective::Parity { .. } => solve_parity(graph, objective, config),
    }
}

/// Value-iteration sweeps for a reachability game with sink targets, for
/// inspecting convergence.
pub fn value_iteration<'g>(graph: &'g Graph, targets: &BTreeSet<String>) -> Result<Sweeps<'g>, SolverError> {
    let win = names_to_mask(graph, targets)?;
    let lose = vec![false; graph.len()];
    let fixed = pinned(graph, &win, &lose)
        .into_iter()
        .map(|p| p.map(|w| if w { 0.0 } else { 1.0 }))
        .collect();
    Ok(Sweeps::new(graph, fixed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn fork_a() -> Graph {
        Graph::from_edges(
            &["a", "b", "c", "d", "e", "f", "g"],
            "a",
            &[("a", "b"), ("a", "e"), ("b", "c"), ("b", "d"), ("e", "f"), ("e", "g")],
        )
        .unwrap()
    }

    fn shuttle() -> Graph {
        Graph::from_edges(
            &["a", "b", "c", "d"],
            "b",
            &[("a", "a"), ("b", "a"), ("b", "c"), ("c", "b"), ("c", "d"), ("d", "d")],
        )
        .unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn fork_a_blue() {
        let m = solve_reach(&fork_a(), &set(&["c", "d", "g"]), &SolverConfig::exact()).unwrap();
        assert_eq!(m.values["a"], ratio(1, 4));
        assert_eq!(m.values["b"], int(0));
        assert_eq!(m.values["e"], ratio(1, 2));
        assert_eq!(m.values["f"], int(1));
        assert_eq!(m.v_minus("a"), Some("b"));
        assert_eq!(m.v_plus("a"), Some("e"));
        assert_eq!(m.v_minus("e"), Some("g"));
        m.check(&fork_a()).unwrap();
    }

    #[test]
    fn fork_a_red() {
        let m = solve_reach(&fork_a(), &set(&["d", "f"]), &SolverConfig::exact()).unwrap();
        assert_eq!(m.values["a"], ratio(1, 2));
    }

    #[test]
    fn non_sink_target_is_rejected() {
        let g = shuttle();
        assert_eq!(
            solve_reach(&g, &set(&["a"]), &SolverConfig::exact()),
            Err(SolverError::NonSinkTarget("a".into()))
        );
    }

    #[test]
    fn two_cycle_with_non_sink_target() {
        let g = Graph::from_edges(&["a", "b"], "a", &[("a", "b"), ("b", "a")]).unwrap();
        let m = solve_reach_general(&g, &Objective::reach(["b"]), &SolverConfig::exact()).unwrap();
        assert_eq!(m.values["a"], int(0));
        assert_eq!(m.values["b"], int(0));
    }

    #[test]
    fn self_loop_without_target_is_hopeless() {
        let g = Graph::from_edges(&["a", "t"], "a", &[("a", "a")]).unwrap();
        let m = solve_reach_general(&g, &Objective::reach(["t"]), &SolverConfig::exact()).unwrap();
        assert_eq!(m.values["a"], int(1));
    }

    #[test]
    fn shuttle_buchi() {
        let g = shuttle();
        let red = solve_parity(&g, &Objective::buchi(["b", "d"]), &SolverConfig::exact()).unwrap();
        let blue = solve_parity(&g, &Objective::buchi(["a", "c"]), &SolverConfig::exact()).unwrap();
        assert_eq!(red.values["b"], ratio(2, 3));
        assert_eq!(blue.values["b"], ratio(1, 3));
        assert_eq!(red.values["d"], int(0));
        assert_eq!(red.values["a"], int(1));
        red.check(&g).unwrap();
        blue.check(&g).unwrap();
    }

    #[test]
    fn strongly_connected_buchi_is_free() {
        let g = Graph::from_edges(&["x", "y", "z"], "x", &[("x", "y"), ("y", "z"), ("z", "x"), ("y", "x")]).unwrap();
        let m = solve_parity(&g, &Objective::buchi(["z"]), &SolverConfig::exact()).unwrap();
        assert!(m.values.values().all(Zero::is_zero));
    }

    #[test]
    fn safety_complements_reach() {
        let g = fork_a();
        let reach = solve_reach(&g, &set(&["d", "f"]), &SolverConfig::exact()).unwrap();
        let safe = solve_safety(&g, &Objective::safety(["a", "b", "c", "e", "g"]), &SolverConfig::exact()).unwrap();
        for v in g.names() {
            assert_eq!(&reach.values[v] + &safe.values[v], int(1), "at {v}");
        }
    }

    #[test]
    fn iterative_matches_on_shuttle() {
        let g = shuttle();
        let m = solve_parity(&g, &Objective::buchi(["b", "d"]), &SolverConfig::iterative()).unwrap();
        assert!((rational::to_f64(&m.values["b"]) - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn sweeps_do_not_increase() {
        let g = Graph::from_edges(
            &["a", "b", "c", "t"],
            "a",
            &[("a", "b"), ("b", "a"), ("b", "c"), ("c", "a"), ("c", "t")],
        )
        .unwrap();
        let mut prev = vec![1.0; 4];
        for (x, _) in value_iteration(&g, &set(&["t"])).unwrap().take(200) {
            for (a, b) in x.iter().zip(&prev) {
                assert!(a <= b);
            }
            prev = x;
        }
    }

    #[test]
    fn oracle_agrees_on_fork_a() {
        let g = fork_a();
        let o = brute_force_oracle(&g, &set(&["c", "d", "g"])).unwrap();
        assert_eq!(o.values["a"], ratio(1, 4));
        let o = brute_force_oracle(&Graph::from_edges(&["v", "t"], "v", &[("v", "t")]).unwrap(), &set(&["t"])).unwrap();
        assert_eq!(o.values["v"], int(0));
    }

    #[test]
    fn oracle_shuttle_reach_to_d() {
        let g = shuttle().with_sinks(&[false, false, false, true]);
        let o = brute_force_oracle(&g, &set(&["d"])).unwrap();
        assert_eq!(o.values["b"], ratio(2, 3));
    }

    #[test]
    fn json_round_trip() {
        let m = solve_reach(&fork_a(), &set(&["c", "d", "g"]), &SolverConfig::exact()).unwrap();
        let s = m.to_json();
        assert!(s.contains(r#""a":"1/4""#));
        assert!(s.contains(r#""a":["b","e"]"#));
        assert_eq!(ThresholdMap::from_json(&s).unwrap(), m);
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            tolerance: 0.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}

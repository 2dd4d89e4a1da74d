//! Tenders: action table, bid table and threshold budget, plus the surplus
//! schedule that keeps them winning on cyclic graphs.
//!
//! Outside a target the tender bids `base(v) + η·(2^(M+1-r) - 1)` and moves
//! to `v⁻`, where `r` is the min-edge rank of `v`, `M` the largest rank and
//! `η = ε₀ / 2^(M+2)` for the initial surplus `ε₀ = B⁰ - 𝔹`. With the
//! potential `P(v) = th(v) + η·(2^(M+1) - 2^(M+1-r(v)))` the excess `B - P`
//! grows by at least `η` per step whether the tender wins or loses, so a
//! target is reached after finitely many steps.
//!
//! Büchi and parity tenders switch to a pursuit once the token enters a good
//! bottom component: they chase its top-colored vertices round robin, each
//! leg being a reachability game of threshold 0 whose surplus restarts from
//! the current budget.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::SynthesisError;
use crate::graph::Graph;
use crate::objective::Objective;
use crate::rational::{self, half, pow2, Rational};
use crate::scc::scc_decompose;
use crate::threshold::{classify_bottoms, ThresholdMap};

/// A good bottom component and the vertices a pursuit cycles through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub members: BTreeSet<String>,
    pub goals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tender {
    #[serde(rename = "budget", with = "rational::serde_str")]
    pub threshold_budget: Rational,
    pub action: BTreeMap<String, String>,
    #[serde(rename = "bid", with = "rational::serde_map")]
    pub base_bid: BTreeMap<String, Rational>,
    #[serde(with = "rational::serde_str")]
    pub gamma: Rational,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rank: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub targets: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pursuit: Vec<Region>,
    #[serde(default = "yes", skip_serializing_if = "is_set")]
    pub surplus: bool,
}

fn yes() -> bool {
    true
}

fn is_set(b: &bool) -> bool {
    *b
}

enum Plan<'a> {
    Idle,
    Reach,
    Pursue { region: &'a Region, goal: &'a str, start: usize },
}

pub fn make_tender(graph: &Graph, th_map: &ThresholdMap) -> Result<Tender, SynthesisError> {
    let v0 = graph.name(graph.initial());
    let budget = th_map
        .value(v0)
        .ok_or_else(|| SynthesisError::ThresholdMismatch(format!("no threshold for {v0:?}")))?;
    if budget >= &Rational::one() {
        return Err(SynthesisError::NoWinningTender);
    }
    let mut action = BTreeMap::new();
    let mut base_bid = BTreeMap::new();
    for (v, (lo, hi)) in &th_map.witness {
        let (Some(tl), Some(th)) = (th_map.value(lo), th_map.value(hi)) else {
            return Err(SynthesisError::ThresholdMismatch(format!("witness of {v:?} has no value")));
        };
        action.insert(v.clone(), lo.clone());
        base_bid.insert(v.clone(), (th - tl) * half());
    }
    Ok(Tender {
        threshold_budget: budget.clone(),
        action,
        base_bid,
        gamma: half(),
        rank: th_map.rank.clone(),
        targets: th_map.targets.clone(),
        pursuit: Vec::new(),
        surplus: true,
    })
}

impl Tender {
    /// Adds the in-component pursuit for a Büchi or parity objective.
    pub fn with_pursuit(mut self, graph: &Graph, objective: &Objective) -> Result<Self, SynthesisError> {
        let colors = objective.parity_colors(graph)?;
        let (good, _) = classify_bottoms(graph, &colors);
        let scc = scc_decompose(graph);
        for comp in scc.bottoms() {
            if !good[comp[0]] {
                continue;
            }
            let top = comp.iter().map(|&v| colors[v]).max().expect("non-empty");
            self.pursuit.push(Region {
                members: graph.names_of(comp.iter().copied()),
                goals: comp
                    .iter()
                    .filter(|&&v| colors[v] == top)
                    .map(|&v| graph.name(v).to_string())
                    .collect(),
            });
        }
        Ok(self)
    }

    /// Plain threshold bids with no surplus; enough on acyclic graphs.
    pub fn without_surplus(mut self) -> Self {
        self.surplus = false;
        self
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tender serializes")
    }

    /// Structural invariants against `graph`.
    pub fn check(&self, graph: &Graph) -> Result<(), String> {
        if self.threshold_budget.is_negative() || self.threshold_budget >= Rational::one() {
            return Err(format!("budget {} outside [0,1)", self.threshold_budget));
        }
        for (v, u) in &self.action {
            let (Some(vi), Some(ui)) = (graph.index_of(v), graph.index_of(u)) else {
                return Err(format!("action {v} -> {u} names an unknown vertex"));
            };
            if !graph.has_edge(vi, ui) {
                return Err(format!("action {v} -> {u} is not an edge"));
            }
        }
        for (v, b) in &self.base_bid {
            if b.is_negative() || b > &half() {
                return Err(format!("base bid {b} at {v} outside [0,1/2]"));
            }
        }
        Ok(())
    }

    fn max_rank(&self) -> u32 {
        self.rank.values().copied().max().unwrap_or(0)
    }

    fn plan<'a>(&'a self, path: &[String]) -> Plan<'a> {
        let v = path.last().expect("non-empty path");
        let entry = path.iter().position(|u| self.targets.contains(u));
        match entry {
            Some(e) if !self.pursuit.is_empty() => {
                let Some(region) = self.pursuit.iter().find(|r| r.members.contains(&path[e])) else {
                    return Plan::Idle;
                };
                if !region.members.contains(v) || region.goals.is_empty() {
                    return Plan::Idle;
                }
                let mut idx = 0;
                let mut start = e;
                for (i, u) in path.iter().enumerate().skip(e) {
                    if *u == region.goals[idx] {
                        idx = (idx + 1) % region.goals.len();
                        start = i;
                    }
                }
                Plan::Pursue {
                    region,
                    goal: &region.goals[idx],
                    start,
                }
            }
            Some(_) => Plan::Idle,
            None if self.rank.contains_key(v) && self.action.contains_key(v) => Plan::Reach,
            None => Plan::Idle,
        }
    }

    /// Bid after the vertex path `path`, where `budgets[i]` is this tender's
    /// budget when the token stood on `path[i]`.
    pub fn bid(&self, graph: &Graph, path: &[String], budgets: &[Rational]) -> Rational {
        let v = path.last().expect("non-empty path");
        let budget = budgets.last().expect("non-empty budgets");
        let raw = match self.plan(path) {
            Plan::Idle => Rational::zero(),
            Plan::Reach => {
                let base = self.base_bid.get(v).cloned().unwrap_or_else(Rational::zero);
                let eps = &budgets[0] - &self.threshold_budget;
                if !self.surplus || !eps.is_positive() {
                    base
                } else {
                    base + schedule(&eps, self.max_rank(), self.rank[v])
                }
            }
            Plan::Pursue { region, goal, start } => {
                if !self.surplus {
                    Rational::zero()
                } else {
                    let (r, m) = pursuit_rank(graph, region, goal, v);
                    schedule(&budgets[start], m, r)
                }
            }
        };
        raw.min(budget.clone())
    }

    /// Successor chosen after the vertex path `path`; `None` at a sink.
    pub fn choose(&self, graph: &Graph, path: &[String]) -> Option<String> {
        let v = path.last().expect("non-empty path");
        let vi = graph.index_of(v)?;
        let succ = graph.successors(vi);
        let first = graph.name(*succ.first()?).to_string();
        match self.plan(path) {
            Plan::Reach => Some(self.action[v].clone()),
            Plan::Idle => Some(self.action.get(v).cloned().unwrap_or(first)),
            Plan::Pursue { region, goal, .. } => {
                let dist = distances_to(graph, region, goal);
                let (r, _) = pursuit_rank(graph, region, goal, v);
                succ.iter()
                    .map(|&u| graph.name(u))
                    .find(|u| dist.get(*u) == Some(&(r - 1)))
                    .map(str::to_string)
                    .or(Some(first))
            }
        }
    }
}

/// Surplus added at rank `r`: `η·(2^(M+1-r) - 1)` with `η = ε₀ / 2^(M+2)`.
fn schedule(eps: &Rational, max_rank: u32, r: u32) -> Rational {
    let m = i64::from(max_rank);
    let eta = eps * pow2(-(m + 2));
    eta * (pow2(m + 1 - i64::from(r)) - Rational::one())
}

/// Shortest distances to `goal` inside `region`.
fn distances_to(graph: &Graph, region: &Region, goal: &str) -> BTreeMap<String, u32> {
    let pred = graph.predecessors();
    let mut dist = BTreeMap::new();
    let Some(g) = graph.index_of(goal) else {
        return dist;
    };
    dist.insert(goal.to_string(), 0);
    let mut queue = VecDeque::from([g]);
    while let Some(u) = queue.pop_front() {
        let d = dist[graph.name(u)];
        for &w in &pred[u] {
            let name = graph.name(w);
            if region.members.contains(name) && !dist.contains_key(name) {
                dist.insert(name.to_string(), d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Rank of `v` in a pursuit leg towards `goal`, and the largest rank of the
/// leg. Standing on the goal itself means going round once more.
fn pursuit_rank(graph: &Graph, region: &Region, goal: &str, v: &str) -> (u32, u32) {
    let dist = distances_to(graph, region, goal);
    let back = graph
        .index_of(goal)
        .and_then(|g| graph.successors(g).iter().filter_map(|&u| dist.get(graph.name(u))).min().copied())
        .map_or(1, |d| d + 1);
    let max = dist.values().copied().max().unwrap_or(0).max(back);
    let r = if v == goal { back } else { dist.get(v).copied().unwrap_or(max) };
    (r, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::threshold::{solve_parity, solve_reach, SolverConfig};

    fn fork_a() -> Graph {
        Graph::from_edges(
            &["a", "b", "c", "d", "e", "f", "g"],
            "a",
            &[("a", "b"), ("a", "e"), ("b", "c"), ("b", "d"), ("e", "f"), ("e", "g")],
        )
        .unwrap()
    }

    fn reach(g: &Graph, t: &[&str]) -> ThresholdMap {
        let set = t.iter().map(|s| s.to_string()).collect();
        solve_reach(g, &set, &SolverConfig::exact()).unwrap()
    }

    #[test]
    fn fork_a_blue_tender() {
        let g = fork_a();
        let t = make_tender(&g, &reach(&g, &["c", "d", "g"])).unwrap();
        assert_eq!(t.threshold_budget, ratio(1, 4));
        assert_eq!(t.action["a"], "b");
        assert_eq!(t.action["e"], "g");
        assert_eq!(t.base_bid["a"], ratio(1, 4));
        assert!(!t.base_bid.contains_key("c"));
        t.check(&g).unwrap();
    }

    #[test]
    fn fork_a_red_bids_nothing_at_a() {
        let g = fork_a();
        let t = make_tender(&g, &reach(&g, &["d", "f"])).unwrap();
        assert_eq!(t.base_bid["a"], int(0));
    }

    #[test]
    fn hopeless_start_has_no_tender() {
        let g = Graph::from_edges(&["a", "t"], "a", &[("a", "a")]).unwrap();
        assert_eq!(make_tender(&g, &reach(&g, &["t"])), Err(SynthesisError::NoWinningTender));
    }

    #[test]
    fn surplus_bid_is_within_budget_and_above_base() {
        let g = fork_a();
        let t = make_tender(&g, &reach(&g, &["c", "d", "g"])).unwrap();
        let path = vec!["a".to_string()];
        let b0 = ratio(1, 4) + ratio(1, 100);
        let bid = t.bid(&g, &path, std::slice::from_ref(&b0));
        assert!(bid > ratio(1, 4) && bid < b0);
        let plain = t.clone().without_surplus();
        assert_eq!(plain.bid(&g, &path, &[b0]), ratio(1, 4));
    }

    #[test]
    fn reach_target_latches() {
        let g = Graph::from_edges(&["a", "b"], "a", &[("a", "b"), ("b", "a")]).unwrap();
        let m = crate::threshold::solve_reach_general(&g, &Objective::reach(["b"]), &SolverConfig::exact()).unwrap();
        let t = make_tender(&g, &m).unwrap();
        let path: Vec<String> = ["a", "b", "a"].iter().map(|s| s.to_string()).collect();
        assert_eq!(t.bid(&g, &path, &[int(1), int(1), int(1)]), int(0));
    }

    #[test]
    fn pursuit_cycles_through_goals() {
        let g = Graph::from_edges(
            &["x", "y", "z"],
            "x",
            &[("x", "y"), ("y", "z"), ("z", "x"), ("y", "x")],
        )
        .unwrap();
        let o = Objective::buchi(["x", "z"]);
        let m = solve_parity(&g, &o, &SolverConfig::exact()).unwrap();
        let t = make_tender(&g, &m).unwrap().with_pursuit(&g, &o).unwrap();
        assert_eq!(t.pursuit.len(), 1);
        let p = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        // at x (first goal reached) the next goal is z
        assert_eq!(t.choose(&g, &p(&["x"])), Some("y".into()));
        assert_eq!(t.choose(&g, &p(&["x", "y"])), Some("z".into()));
        assert_eq!(t.choose(&g, &p(&["x", "y", "z"])), Some("x".into()));
        let bid = t.bid(&g, &p(&["x", "y"]), &[ratio(1, 2), ratio(1, 2)]);
        assert!(bid.is_positive() && bid < ratio(1, 2));
    }

    #[test]
    fn json_shape() {
        let g = fork_a();
        let t = make_tender(&g, &reach(&g, &["c", "d", "g"])).unwrap();
        let s = t.to_json();
        assert!(s.contains(r#""budget":"1/4""#));
        assert!(s.contains(r#""gamma":"1/2""#));
        assert!(s.contains(r#""bid":{"a":"1/4""#));
        assert!(!s.contains("surplus"));
        assert_eq!(Tender::from_json(&s).unwrap(), t);
        let plain = t.without_surplus();
        assert_eq!(Tender::from_json(&plain.to_json()).unwrap(), plain);
    }
}

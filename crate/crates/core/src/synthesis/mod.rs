//! Decentralized synthesis: strong, assume-admissible and assume-guarantee.

mod tender;

use std::collections::BTreeSet;
use std::fmt;

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{ObjectiveError, SynthesisError};
use crate::graph::Graph;
use crate::objective::Objective;
use crate::rational::{self, Rational};
use crate::scc::{is_cyclic, scc_decompose};
use crate::sinkify::sinkify;
use crate::threshold::{solve_objective, solve_parity, solve_reach, SolverConfig, ThresholdMap};

pub use tender::{make_tender, Region, Tender};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthMode {
    Strong,
    Aa,
    Ag,
}

impl fmt::Display for SynthMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SynthMode::Strong => "strong",
            SynthMode::Aa => "aa",
            SynthMode::Ag => "ag",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Success,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisOutcome {
    pub mode: SynthMode,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tenders: Option<(Tender, Tender)>,
    /// Thresholds at the initial vertex, per objective.
    #[serde(with = "rational::serde_str")]
    pub threshold_1: Rational,
    #[serde(with = "rational::serde_str")]
    pub threshold_2: Rational,
    /// Vertices of the graph the tenders were synthesized on.
    pub subgraph: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// False when a failure does not prove that no tenders exist.
    pub complete: bool,
}

impl SynthesisOutcome {
    pub fn is_success(&self) -> bool {
        self.status == Status::Success
    }

    pub fn budgets(&self) -> (&Rational, &Rational) {
        (&self.threshold_1, &self.threshold_2)
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }
}

/// Vertex-safety contract: tender `i` promises never to visit `forbidden_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contract {
    #[serde(default)]
    pub forbidden_1: BTreeSet<String>,
    #[serde(default)]
    pub forbidden_2: BTreeSet<String>,
}

impl Contract {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("contract serializes")
    }
}

fn tender_for(graph: &Graph, map: &ThresholdMap, objective: &Objective) -> Result<Tender, SynthesisError> {
    let t = make_tender(graph, map)?;
    match objective {
        Objective::Buchi { .. } | Objective::Parity { .. } => t.with_pursuit(graph, objective),
        _ => Ok(t),
    }
}

fn initial_value(graph: &Graph, map: &ThresholdMap) -> Rational {
    map.values[graph.name(graph.initial())].clone()
}

/// Decides the pair from two independent threshold solves on `graph`.
fn decide(
    mode: SynthMode,
    graph: &Graph,
    objectives: (&Objective, &Objective),
    maps: (&ThresholdMap, &ThresholdMap),
    complete: bool,
) -> Result<SynthesisOutcome, SynthesisError> {
    let (b1, b2) = (initial_value(graph, maps.0), initial_value(graph, maps.1));
    let sum = &b1 + &b2;
    let mut outcome = SynthesisOutcome {
        mode,
        status: Status::Fail,
        tenders: None,
        threshold_1: b1,
        threshold_2: b2,
        subgraph: graph.names().to_vec(),
        reason: None,
        complete,
    };
    if sum < Rational::one() {
        outcome.tenders = Some((
            tender_for(graph, maps.0, objectives.0)?,
            tender_for(graph, maps.1, objectives.1)?,
        ));
        outcome.status = Status::Success;
    } else {
        outcome.reason = Some(format!(
            "threshold sum {} + {} = {} is not below 1",
            outcome.threshold_1, outcome.threshold_2, sum
        ));
    }
    Ok(outcome)
}

pub fn synth_strong(
    graph: &Graph,
    objective_1: &Objective,
    objective_2: &Objective,
    config: &SolverConfig,
) -> Result<SynthesisOutcome, SynthesisError> {
    let m1 = solve_objective(graph, objective_1, config)?;
    let m2 = solve_objective(graph, objective_2, config)?;
    decide(SynthMode::Strong, graph, (objective_1, objective_2), (&m1, &m2), true)
}

fn reach_set(objective: &Objective) -> Result<&BTreeSet<String>, SynthesisError> {
    match objective {
        Objective::Reach { set } => Ok(set),
        other => Err(ObjectiveError::WrongKind {
            expected: "reach",
            found: other.kind_name(),
        }
        .into()),
    }
}

fn buchi_mask(graph: &Graph, objective: &Objective) -> Result<Vec<bool>, SynthesisError> {
    match objective {
        Objective::Buchi { .. } => Ok(objective.set_mask(graph)?),
        other => Err(ObjectiveError::WrongKind {
            expected: "buchi",
            found: other.kind_name(),
        }
        .into()),
    }
}

fn induced_or_pruned(graph: &Graph, keep: &[bool]) -> Result<Graph, SynthesisError> {
    graph
        .induced(keep)
        .ok_or_else(|| SynthesisError::InitialPruned(graph.name(graph.initial()).to_string()))
}

/// Largest admissible sub-graph for two reachability objectives with sink
/// targets: drops the vertices where both thresholds are 1.
pub fn las_reach(
    graph: &Graph,
    objective_1: &Objective,
    objective_2: &Objective,
    config: &SolverConfig,
) -> Result<Graph, SynthesisError> {
    let m1 = solve_reach(graph, reach_set(objective_1)?, config)?;
    let m2 = solve_reach(graph, reach_set(objective_2)?, config)?;
    let one = Rational::one();
    let keep: Vec<bool> = graph
        .names()
        .iter()
        .map(|v| m1.values[v] < one || m2.values[v] < one)
        .collect();
    induced_or_pruned(graph, &keep)
}

pub fn synth_assume_admissible_reach(
    graph: &Graph,
    objective_1: &Objective,
    objective_2: &Objective,
    config: &SolverConfig,
) -> Result<SynthesisOutcome, SynthesisError> {
    let sub = las_reach(graph, objective_1, objective_2, config)?;
    let (o1, o2) = (objective_1.restrict_to(&sub), objective_2.restrict_to(&sub));
    let m1 = solve_reach(&sub, reach_set(&o1)?, config)?;
    let m2 = solve_reach(&sub, reach_set(&o2)?, config)?;
    decide(SynthMode::Aa, &sub, (&o1, &o2), (&m1, &m2), graph.is_binary())
}

/// Largest admissible sub-graph for two Büchi objectives: repeatedly drops
/// vertices that cannot reach a bottom component accepting for either.
pub fn las_buchi(graph: &Graph, objective_1: &Objective, objective_2: &Objective) -> Result<Graph, SynthesisError> {
    let mut g = graph.clone();
    loop {
        let (o1, o2) = (objective_1.restrict_to(&g), objective_2.restrict_to(&g));
        let (a1, a2) = (buchi_mask(&g, &o1)?, buchi_mask(&g, &o2)?);
        let scc = scc_decompose(&g);
        let mut good = vec![false; g.len()];
        for comp in scc.bottoms() {
            if comp.iter().any(|&v| a1[v] || a2[v]) {
                for &v in comp {
                    good[v] = true;
                }
            }
        }
        let keep = g.reachable_to_mask(&good);
        if keep.iter().all(|&k| k) {
            return Ok(g);
        }
        g = induced_or_pruned(&g, &keep)?;
    }
}

/// Per objective, the union of bottom components of `subgraph` holding one
/// of its accepting vertices.
pub fn reachability_core(
    subgraph: &Graph,
    objective_1: &Objective,
    objective_2: &Objective,
) -> Result<(BTreeSet<String>, BTreeSet<String>), SynthesisError> {
    let o1 = objective_1.restrict_to(subgraph);
    let o2 = objective_2.restrict_to(subgraph);
    let (a1, a2) = (buchi_mask(subgraph, &o1)?, buchi_mask(subgraph, &o2)?);
    let scc = scc_decompose(subgraph);
    let mut t1 = BTreeSet::new();
    let mut t2 = BTreeSet::new();
    for comp in scc.bottoms() {
        if comp.iter().any(|&v| a1[v]) {
            t1.extend(subgraph.names_of(comp.iter().copied()));
        }
        if comp.iter().any(|&v| a2[v]) {
            t2.extend(subgraph.names_of(comp.iter().copied()));
        }
    }
    Ok((t1, t2))
}

pub fn synth_assume_admissible_buchi(
    graph: &Graph,
    objective_1: &Objective,
    objective_2: &Objective,
    config: &SolverConfig,
) -> Result<SynthesisOutcome, SynthesisError> {
    let sub = las_buchi(graph, objective_1, objective_2)?;
    let (t1, t2) = reachability_core(&sub, objective_1, objective_2)?;
    let (o1, o2) = (objective_1.restrict_to(&sub), objective_2.restrict_to(&sub));
    let m1 = solve_parity(&sub, &o1, config)?;
    let m2 = solve_parity(&sub, &o2, config)?;
    let mut outcome = decide(SynthMode::Aa, &sub, (&o1, &o2), (&m1, &m2), graph.is_binary())?;
    if t1.is_disjoint(&t2) {
        outcome.status = Status::Fail;
        outcome.tenders = None;
        outcome.reason = Some(format!(
            "reachability cores {{{}}} and {{{}}} are disjoint",
            join(&t1),
            join(&t2)
        ));
    }
    Ok(outcome)
}

fn join(set: &BTreeSet<String>) -> String {
    set.iter().cloned().collect::<Vec<_>>().join(",")
}

/// Induced sub-graph avoiding every forbidden vertex.
pub fn contract_subgraph(graph: &Graph, contract: &Contract) -> Result<Graph, SynthesisError> {
    let mut keep = vec![true; graph.len()];
    for v in contract.forbidden_1.iter().chain(&contract.forbidden_2) {
        let i = graph.index_of(v).ok_or_else(|| ObjectiveError::UnknownVertex(v.clone()))?;
        keep[i] = false;
    }
    graph
        .induced(&keep)
        .ok_or_else(|| SynthesisError::InitialForbidden(graph.name(graph.initial()).to_string()))
}

fn has_targets(objective: &Objective) -> bool {
    match objective {
        Objective::Reach { set } | Objective::Buchi { set } => !set.is_empty(),
        _ => true,
    }
}

pub fn synth_assume_guarantee(
    graph: &Graph,
    objective_1: &Objective,
    objective_2: &Objective,
    contract: &Contract,
    config: &SolverConfig,
) -> Result<SynthesisOutcome, SynthesisError> {
    let sub = contract_subgraph(graph, contract)?;
    let (o1, o2) = (objective_1.restrict_to(&sub), objective_2.restrict_to(&sub));
    for (i, o) in [(1, &o1), (2, &o2)] {
        if !has_targets(o) {
            return Err(SynthesisError::TargetsPruned(i));
        }
    }
    let m1 = solve_objective(&sub, &o1, config)?;
    let m2 = solve_objective(&sub, &o2, config)?;
    decide(SynthMode::Ag, &sub, (&o1, &o2), (&m1, &m2), false)
}

/// Runs the requested synthesis route.
pub fn synthesize(
    graph: &Graph,
    objective_1: &Objective,
    objective_2: &Objective,
    mode: SynthMode,
    contract: Option<&Contract>,
    config: &SolverConfig,
) -> Result<SynthesisOutcome, SynthesisError> {
    match mode {
        SynthMode::Strong => synth_strong(graph, objective_1, objective_2, config),
        SynthMode::Aa => match (objective_1, objective_2) {
            (Objective::Reach { .. }, Objective::Reach { .. }) => {
                synth_assume_admissible_reach(graph, objective_1, objective_2, config)
            }
            (Objective::Buchi { .. }, Objective::Buchi { .. }) => {
                synth_assume_admissible_buchi(graph, objective_1, objective_2, config)
            }
            _ => Err(SynthesisError::Unsupported(format!(
                "assume-admissible synthesis needs two reach or two buchi objectives, got {} and {}",
                objective_1.kind_name(),
                objective_2.kind_name()
            ))),
        },
        SynthMode::Ag => {
            let contract = contract.ok_or_else(|| SynthesisError::Unsupported("assume-guarantee synthesis needs a contract".into()))?;
            synth_assume_guarantee(graph, objective_1, objective_2, contract, config)
        }
    }
}

/// Whether some path satisfies both objectives. Decided for two reach or
/// two Büchi objectives; `None` otherwise.
pub fn objectives_overlap(graph: &Graph, objective_1: &Objective, objective_2: &Objective) -> Result<Option<bool>, SynthesisError> {
    match (objective_1, objective_2) {
        (Objective::Reach { .. }, Objective::Reach { .. }) => {
            let s = sinkify(graph, objective_1, objective_2)?;
            let m1 = s.objective_1.reach_mask(&s.graph)?;
            let m2 = s.objective_2.reach_mask(&s.graph)?;
            let seen = s.graph.reachable_from(s.graph.initial());
            Ok(Some((0..s.graph.len()).any(|v| seen[v] && m1[v] && m2[v])))
        }
        (Objective::Buchi { .. }, Objective::Buchi { .. }) => {
            let (a1, a2) = (buchi_mask(graph, objective_1)?, buchi_mask(graph, objective_2)?);
            let seen = graph.reachable_from(graph.initial());
            let scc = scc_decompose(graph);
            let joint = scc.components.iter().any(|comp| {
                let live = is_cyclic(graph, comp) || graph.is_sink(comp[0]);
                live && seen[comp[0]] && comp.iter().any(|&v| a1[v]) && comp.iter().any(|&v| a2[v])
            });
            Ok(Some(joint))
        }
        _ => Ok(None),
    }
}

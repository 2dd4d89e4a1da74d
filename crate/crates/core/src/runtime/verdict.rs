//! Finite-horizon verdicts.
//!
//! Reach and safety verdicts become final as soon as the outcome can no
//! longer change: a target was hit or can no longer be reached, an unsafe
//! vertex was hit or can no longer be reached.
//!
//! Büchi and parity runs count as satisfied once the token sits in a good
//! bottom component and has visited its top color three times since entry.
//! A good sink counts at once.

use serde::{Deserialize, Serialize};

use super::TraceRecord;
use crate::graph::Graph;
use crate::objective::Objective;
use crate::scc::scc_decompose;
use crate::threshold::classify_bottoms;

const ACCEPTING_VISITS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
    Undetermined { horizon: usize },
}

/// Verdict on the vertex sequence of `trace`; an empty trace stands for the
/// initial vertex alone.
pub fn check_objective(trace: &[TraceRecord], objective: &Objective, graph: &Graph) -> Verdict {
    let mut path: Vec<String> = match trace.first() {
        Some(r) => vec![r.config_before.vertex.clone()],
        None => vec![graph.name(graph.initial()).to_string()],
    };
    path.extend(trace.iter().map(|r| r.next_vertex.clone()));
    check_path(&path, objective, graph)
}

pub fn check_path(path: &[String], objective: &Objective, graph: &Graph) -> Verdict {
    let undetermined = Verdict::Undetermined {
        horizon: path.len().saturating_sub(1),
    };
    let idx: Vec<usize> = path.iter().filter_map(|v| graph.index_of(v)).collect();
    let Some(&last) = idx.last() else {
        return undetermined;
    };
    match objective {
        Objective::Reach { set } => {
            if path.iter().any(|v| set.contains(v)) {
                return Verdict::Satisfied;
            }
            let targets: Vec<bool> = graph.names().iter().map(|v| set.contains(v)).collect();
            if graph.reachable_to_mask(&targets)[last] {
                undetermined
            } else {
                Verdict::Violated
            }
        }
        Objective::Safety { set } => {
            if path.iter().any(|v| !set.contains(v)) {
                return Verdict::Violated;
            }
            let unsafe_mask: Vec<bool> = graph.names().iter().map(|v| !set.contains(v)).collect();
            if graph.reachable_to_mask(&unsafe_mask)[last] {
                undetermined
            } else {
                Verdict::Satisfied
            }
        }
        Objective::Buchi { .. } | Objective::Parity { .. } => {
            let Ok(colors) = objective.parity_colors(graph) else {
                return undetermined;
            };
            let (good, _) = classify_bottoms(graph, &colors);
            if !good[last] {
                return undetermined;
            }
            if graph.is_sink(last) {
                return Verdict::Satisfied;
            }
            let scc = scc_decompose(graph);
            let comp = scc.component_of[last];
            let top = scc.components[comp].iter().map(|&v| colors[v]).max().expect("non-empty");
            let entry = idx.iter().position(|&v| scc.component_of[v] == comp).expect("last is inside");
            let visits = idx[entry..].iter().filter(|&&v| colors[v] == top).count();
            if visits >= ACCEPTING_VISITS {
                Verdict::Satisfied
            } else {
                undetermined
            }
        }
    }
}

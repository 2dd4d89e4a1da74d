//! Python bindings. Every value crosses the boundary as a JSON string in the
//! same formats the command-line tool reads and writes.

use bidsched_core::rational;
use bidsched_core::runtime::{self, trace_jsonl, RunSummary};
use bidsched_core::threshold::{self, Mode};
use bidsched_core::{Contract, Graph, Objective, SolverConfig, SynthMode, Tender};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn bad(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config(iterative: bool) -> SolverConfig {
    let mut cfg = SolverConfig::default();
    if iterative {
        cfg.mode = Mode::Iterative;
    }
    cfg
}

fn load(graph_json: &str, objective_json: &str) -> PyResult<(Graph, Objective)> {
    let graph = Graph::from_json(graph_json).map_err(bad)?;
    let objective = Objective::from_json(objective_json).map_err(bad)?;
    objective.validate(&graph).map_err(bad)?;
    Ok((graph, objective))
}

/// Threshold map of one objective, as JSON.
#[pyfunction]
#[pyo3(signature = (graph_json, objective_json, iterative = false))]
fn solve(graph_json: &str, objective_json: &str, iterative: bool) -> PyResult<String> {
    let (graph, objective) = load(graph_json, objective_json)?;
    threshold::solve_objective(&graph, &objective, &config(iterative))
        .map(|m| m.to_json())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Synthesis outcome for two objectives given as a JSON array.
#[pyfunction]
#[pyo3(signature = (graph_json, objectives_json, mode = "strong", contract_json = None))]
fn synthesize(graph_json: &str, objectives_json: &str, mode: &str, contract_json: Option<&str>) -> PyResult<String> {
    let graph = Graph::from_json(graph_json).map_err(bad)?;
    let objectives: Vec<Objective> = serde_json::from_str(objectives_json).map_err(bad)?;
    let [o1, o2] = <[Objective; 2]>::try_from(objectives).map_err(|v| bad(format!("expected two objectives, got {}", v.len())))?;
    for o in [&o1, &o2] {
        o.validate(&graph).map_err(bad)?;
    }
    let mode = match mode {
        "strong" => SynthMode::Strong,
        "aa" => SynthMode::Aa,
        "ag" => SynthMode::Ag,
        other => return Err(bad(format!("unknown mode {other:?}"))),
    };
    let contract = contract_json.map(Contract::from_json).transpose().map_err(bad)?;
    bidsched_core::synthesis::synthesize(&graph, &o1, &o2, mode, contract.as_ref(), &SolverConfig::default())
        .map(|o| o.to_json())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Runs two tenders from `split` and returns `(summary_json, trace_jsonl)`.
#[pyfunction]
#[pyo3(signature = (graph_json, tender_1_json, tender_2_json, split, steps, objectives_json = None))]
fn simulate(
    graph_json: &str,
    tender_1_json: &str,
    tender_2_json: &str,
    split: &str,
    steps: usize,
    objectives_json: Option<&str>,
) -> PyResult<(String, String)> {
    let graph = Graph::from_json(graph_json).map_err(bad)?;
    let t1 = Tender::from_json(tender_1_json).map_err(bad)?;
    let t2 = Tender::from_json(tender_2_json).map_err(bad)?;
    t1.check(&graph).map_err(bad)?;
    t2.check(&graph).map_err(bad)?;
    let objectives: Vec<Objective> = match objectives_json {
        Some(s) => serde_json::from_str(s).map_err(bad)?,
        None => Vec::new(),
    };
    let judged: Vec<&Objective> = objectives.iter().collect();
    let start = rational::parse(split).map_err(bad)?;
    let (trace, verdicts) = runtime::run_composition(&graph, &t1, &t2, &start, steps, &judged).map_err(bad)?;
    let summary = RunSummary::new(graph.name(graph.initial()), &start, &trace, verdicts);
    Ok((summary.to_json(), trace_jsonl(&trace)))
}

/// Initial budget of player 1 between two thresholds, as `p/q`.
#[pyfunction]
fn default_split(threshold_1: &str, threshold_2: &str) -> PyResult<String> {
    let a = rational::parse(threshold_1).map_err(bad)?;
    let b = rational::parse(threshold_2).map_err(bad)?;
    Ok(rational::format(&runtime::default_split(&a, &b)))
}

#[pymodule]
fn bidsched(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(default_split, m)?)?;
    Ok(())
}

//! Input loading, output writing and exit-code mapping.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use bidsched_core::{Contract, Graph, Objective, SolverConfig, SolverError, SynthesisError, Tender};
use serde::Serialize;

pub const SYNTH_FAIL: u8 = 1;
const INPUT: u8 = 2;
const SOLVER: u8 = 3;
const PRUNED: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub fn input(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: INPUT,
        error: error.into(),
    }
}

pub fn solver_failure(e: SolverError) -> Failure {
    let code = match e {
        SolverError::Objective(_) | SolverError::NonSinkTarget(_) | SolverError::Config(_) => INPUT,
        _ => SOLVER,
    };
    Failure { code, error: e.into() }
}

pub fn synthesis_failure(e: SynthesisError) -> Failure {
    let code = match &e {
        SynthesisError::InitialPruned(_) => PRUNED,
        SynthesisError::Solver(inner) => return solver_failure(inner.clone()),
        SynthesisError::NoWinningTender | SynthesisError::ThresholdMismatch(_) => SOLVER,
        _ => INPUT,
    };
    Failure { code, error: e.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input)
}

pub fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::from_json(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(input)
}

/// A single objective or an array of them, each checked against `graph`.
pub fn read_objectives(path: &Path, graph: &Graph) -> Result<Vec<Objective>, Failure> {
    let text = read(path)?;
    let parsed: Vec<Objective> = match serde_json::from_str::<Vec<Objective>>(&text) {
        Ok(list) => list,
        Err(_) => vec![Objective::from_json(&text)
            .with_context(|| format!("in {}", path.display()))
            .map_err(input)?],
    };
    for o in &parsed {
        o.validate(graph)
            .with_context(|| format!("in {}", path.display()))
            .map_err(input)?;
    }
    Ok(parsed)
}

pub fn read_pair(path: &Path, graph: &Graph) -> Result<(Objective, Objective), Failure> {
    let mut list = read_objectives(path, graph)?;
    if list.len() != 2 {
        return Err(input(anyhow!("{} must hold exactly two objectives", path.display())));
    }
    let second = list.pop().expect("two");
    Ok((list.pop().expect("two"), second))
}

pub fn read_contract(path: &Path) -> Result<Contract, Failure> {
    Contract::from_json(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(input)
}

pub fn read_tender(path: &Path, graph: &Graph) -> Result<Tender, Failure> {
    let tender = Tender::from_json(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(input)?;
    tender
        .check(graph)
        .map_err(|e| input(anyhow!("{} does not match the graph: {e}", path.display())))?;
    Ok(tender)
}

pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn create(dir: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create {}", dir.display()))
            .map_err(input)?;
        Ok(Output { dir: dir.to_path_buf() })
    }

    pub fn write(&self, name: &str, content: &str) -> Result<PathBuf, Failure> {
        let path = self.dir.join(name);
        fs::write(&path, content)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(input)?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub config: SolverConfig,
    pub seed: u64,
    pub output: PathBuf,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

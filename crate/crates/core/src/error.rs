use thiserror::Error;

use crate::graph::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectiveError {
    #[error("objective references unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("parity coloring has no color for vertex {0:?}")]
    MissingColor(String),
    #[error("expected a {expected} objective, got {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("target {0:?} is not a sink; sinkify the graph first")]
    NonSinkTarget(String),
    #[error("value iteration did not converge within {iterations} sweeps (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("brute-force oracle refuses graphs with {vertices} vertices (limit {limit})")]
    OracleTooLarge { vertices: usize, limit: usize },
    #[error("brute-force oracle found no consistent witness assignment")]
    OracleInconsistent,
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("initial vertex {0:?} is excluded from the sub-graph")]
    InitialPruned(String),
    #[error("threshold at the initial vertex is 1; no winning tender exists")]
    NoWinningTender,
    #[error("contract forbids the initial vertex {0:?}")]
    InitialForbidden(String),
    #[error("contract prunes every target of objective {0}")]
    TargetsPruned(usize),
    #[error("threshold map does not match the graph: {0}")]
    ThresholdMismatch(String),
    #[error("unsupported objective: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuntimeError {
    #[error("history is empty")]
    EmptyHistory,
    #[error("tender {player} bid {bid} with only {budget} available")]
    BidExceedsBudget {
        player: u8,
        bid: String,
        budget: String,
    },
    #[error("tender {player} bid a negative amount {bid}")]
    NegativeBid { player: u8, bid: String },
    #[error("tender {player} moved along a non-edge {from:?} -> {to:?}")]
    IllegalMove { player: u8, from: String, to: String },
    #[error("no move out of sink {0:?}")]
    Stuck(String),
    #[error("initial budget {0} is outside [0, 1]")]
    BudgetOutOfRange(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid dimensions must be positive")]
    Empty,
    #[error("cell ({0}, {1}) lies outside the grid")]
    OutOfBounds(usize, usize),
    #[error("start cell ({0}, {1}) is an obstacle")]
    StartBlocked(usize, usize),
    #[error("target cell ({0}, {1}) is an obstacle")]
    TargetBlocked(usize, usize),
    #[error("rank table has the wrong shape")]
    RankShape,
    #[error("no target is reachable from the start cell")]
    DisconnectedStart,
}

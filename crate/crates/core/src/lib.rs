//! Threshold budgets, tender synthesis and auction-based composition for
//! two-objective games on finite graphs.

pub mod error;
pub mod gen;
pub mod graph;
pub mod grid;
pub mod objective;
pub mod rational;
pub mod runtime;
pub mod scc;
pub mod sinkify;
pub mod synthesis;
pub mod threshold;

pub use error::{GraphError, GridError, ObjectiveError, RuntimeError, SolverError, SynthesisError};
pub use graph::{Graph, GraphData, ValidationReport, Violation};
pub use objective::Objective;
pub use rational::Rational;
pub use runtime::{Configuration, Player, TenderPolicy, TraceRecord, Verdict};
pub use scc::{scc_decompose, SccDecomposition};
pub use sinkify::{sinkify, Sinkified};
pub use synthesis::{Contract, SynthMode, SynthesisOutcome, Tender};
pub use threshold::{SolverConfig, ThresholdMap};

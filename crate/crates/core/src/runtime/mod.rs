//! Composition of two tenders by repeated first-price Richman auctions.
//!
//! Each step both tenders bid from their own budget, player 1 wins ties,
//! the winner pays its bid to the loser and moves the token.

mod adversary;
mod io;
mod verdict;

use num::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::RuntimeError;
use crate::graph::Graph;
use crate::objective::Objective;
use crate::rational::{self, in_unit_interval, ratio, Rational};
use crate::synthesis::Tender;

pub use adversary::{adversary_tender, Adversary, AdversaryKind};
pub use io::{budget_series_csv, trace_csv, trace_from_jsonl, trace_jsonl, RunSummary};
pub use verdict::{check_objective, check_path, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub vertex: String,
    #[serde(with = "rational::serde_str")]
    pub budget_1: Rational,
}

impl Configuration {
    pub fn new(vertex: impl Into<String>, budget_1: Rational) -> Self {
        Configuration {
            vertex: vertex.into(),
            budget_1,
        }
    }

    pub fn budget_2(&self) -> Rational {
        Rational::one() - &self.budget_1
    }

    pub fn budget_of(&self, player: Player) -> Rational {
        match player {
            Player::One => self.budget_1.clone(),
            Player::Two => self.budget_2(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn number(self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }
}

impl From<Player> for u8 {
    fn from(p: Player) -> u8 {
        p.number()
    }
}

impl TryFrom<u8> for Player {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, String> {
        match n {
            1 => Ok(Player::One),
            2 => Ok(Player::Two),
            _ => Err(format!("player must be 1 or 2, got {n}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub config_before: Configuration,
    #[serde(with = "rational::serde_str")]
    pub bid_1: Rational,
    #[serde(with = "rational::serde_str")]
    pub bid_2: Rational,
    pub winner: Player,
    pub next_vertex: String,
    pub config_after: Configuration,
}

impl TraceRecord {
    /// Conservation, bid legality, tie rule and payment, checked exactly.
    pub fn check(&self) -> Result<(), String> {
        let before = &self.config_before;
        let after = &self.config_after;
        if !in_unit_interval(&before.budget_1) || !in_unit_interval(&after.budget_1) {
            return Err(format!("step {}: budget outside [0,1]", self.step));
        }
        if self.bid_1.is_negative() || self.bid_2.is_negative() {
            return Err(format!("step {}: negative bid", self.step));
        }
        if self.bid_1 > before.budget_1 || self.bid_2 > before.budget_2() {
            return Err(format!("step {}: bid exceeds budget", self.step));
        }
        let expected = if self.bid_1 >= self.bid_2 { Player::One } else { Player::Two };
        if self.winner != expected {
            return Err(format!("step {}: winner {} violates the tie rule", self.step, self.winner.number()));
        }
        let paid = match self.winner {
            Player::One => &before.budget_1 - &self.bid_1,
            Player::Two => &before.budget_1 + &self.bid_2,
        };
        if after.budget_1 != paid {
            return Err(format!("step {}: budget transfer is off", self.step));
        }
        if after.budget_1.clone() + after.budget_2() != Rational::one() {
            return Err(format!("step {}: budgets do not sum to 1", self.step));
        }
        if after.vertex != self.next_vertex {
            return Err(format!("step {}: next vertex mismatch", self.step));
        }
        Ok(())
    }
}

/// Anything that can sit on one side of a composition.
pub trait TenderPolicy {
    /// Bid given the configurations so far; `player` tells which budget is
    /// its own.
    fn bid(&self, graph: &Graph, history: &[Configuration], player: Player) -> Rational;

    /// Successor of the last vertex of `path`, or `None` at a sink.
    fn choose(&self, graph: &Graph, path: &[String]) -> Option<String>;
}

impl TenderPolicy for Tender {
    fn bid(&self, graph: &Graph, history: &[Configuration], player: Player) -> Rational {
        let path = vertex_path(history);
        let budgets: Vec<Rational> = history.iter().map(|c| c.budget_of(player)).collect();
        Tender::bid(self, graph, &path, &budgets)
    }

    fn choose(&self, graph: &Graph, path: &[String]) -> Option<String> {
        Tender::choose(self, graph, path)
    }
}

fn vertex_path(history: &[Configuration]) -> Vec<String> {
    history.iter().map(|c| c.vertex.clone()).collect()
}

fn checked_bid(
    tender: &dyn TenderPolicy,
    graph: &Graph,
    history: &[Configuration],
    player: Player,
) -> Result<Rational, RuntimeError> {
    let budget = history.last().expect("non-empty history").budget_of(player);
    let bid = tender.bid(graph, history, player);
    if bid.is_negative() {
        return Err(RuntimeError::NegativeBid {
            player: player.number(),
            bid: rational::format(&bid),
        });
    }
    if bid > budget {
        return Err(RuntimeError::BidExceedsBudget {
            player: player.number(),
            bid: rational::format(&bid),
            budget: rational::format(&budget),
        });
    }
    Ok(bid)
}

/// One auction at the last configuration of `history`.
pub fn compose_step(
    graph: &Graph,
    tender_1: &dyn TenderPolicy,
    tender_2: &dyn TenderPolicy,
    history: &[Configuration],
) -> Result<TraceRecord, RuntimeError> {
    let current = history.last().ok_or(RuntimeError::EmptyHistory)?;
    let v = graph
        .index_of(&current.vertex)
        .ok_or_else(|| RuntimeError::UnknownVertex(current.vertex.clone()))?;
    if !in_unit_interval(&current.budget_1) {
        return Err(RuntimeError::BudgetOutOfRange(rational::format(&current.budget_1)));
    }
    if graph.is_sink(v) {
        return Err(RuntimeError::Stuck(current.vertex.clone()));
    }
    let bid_1 = checked_bid(tender_1, graph, history, Player::One)?;
    let bid_2 = checked_bid(tender_2, graph, history, Player::Two)?;
    let (winner, mover, budget_1) = if bid_1 >= bid_2 {
        (Player::One, tender_1, &current.budget_1 - &bid_1)
    } else {
        (Player::Two, tender_2, &current.budget_1 + &bid_2)
    };
    let path = vertex_path(history);
    let next = mover.choose(graph, &path).ok_or_else(|| RuntimeError::Stuck(current.vertex.clone()))?;
    let legal = graph.index_of(&next).is_some_and(|u| graph.has_edge(v, u));
    if !legal {
        return Err(RuntimeError::IllegalMove {
            player: winner.number(),
            from: current.vertex.clone(),
            to: next,
        });
    }
    Ok(TraceRecord {
        step: history.len() - 1,
        config_before: current.clone(),
        bid_1,
        bid_2,
        winner,
        config_after: Configuration::new(next.clone(), budget_1),
        next_vertex: next,
    })
}

/// Runs up to `max_steps` auctions from the initial vertex, stopping early
/// at a sink, and judges every objective on the resulting trace.
pub fn run_composition(
    graph: &Graph,
    tender_1: &dyn TenderPolicy,
    tender_2: &dyn TenderPolicy,
    initial_budget_1: &Rational,
    max_steps: usize,
    objectives: &[&Objective],
) -> Result<(Vec<TraceRecord>, Vec<Verdict>), RuntimeError> {
    if !in_unit_interval(initial_budget_1) {
        return Err(RuntimeError::BudgetOutOfRange(rational::format(initial_budget_1)));
    }
    let mut history = vec![Configuration::new(graph.name(graph.initial()), initial_budget_1.clone())];
    let mut trace = Vec::new();
    while trace.len() < max_steps {
        let v = graph.index_of(&history.last().expect("non-empty").vertex).expect("vertex checked");
        if graph.is_sink(v) {
            break;
        }
        let record = compose_step(graph, tender_1, tender_2, &history)?;
        history.push(record.config_after.clone());
        trace.push(record);
    }
    let verdicts = objectives.iter().map(|o| check_objective(&trace, o, graph)).collect();
    Ok((trace, verdicts))
}

/// Budget for player 1 halfway between the two thresholds.
pub fn default_split(threshold_1: &Rational, threshold_2: &Rational) -> Rational {
    let slack = Rational::one() - threshold_1 - threshold_2;
    threshold_1 + slack * ratio(1, 2)
}

/// Five budgets strictly between `threshold` and 1.
pub fn robustness_splits(threshold: &Rational) -> Vec<Rational> {
    let room = Rational::one() - threshold;
    (1..=5).map(|j| threshold + &room * ratio(j, 6)).collect()
}

//! Opponents for robustness runs.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Configuration, Player, TenderPolicy};
use crate::error::RuntimeError;
use crate::graph::Graph;
use crate::objective::Objective;
use crate::rational::{half, ratio, Rational};
use crate::threshold::{solve_objective, SolverConfig, ThresholdMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversaryKind {
    /// Uniform fraction of the budget in steps of 1/1000, random successor.
    Random,
    /// Bids 0, moves to the first successor.
    Zero,
    /// Bids the whole budget at the first step, 0 afterwards.
    Greedy,
    /// Plays against the given objective using its threshold map.
    Spoiler(Objective),
}

impl AdversaryKind {
    pub fn name(&self) -> &'static str {
        match self {
            AdversaryKind::Random => "random",
            AdversaryKind::Zero => "zero",
            AdversaryKind::Greedy => "greedy",
            AdversaryKind::Spoiler(_) => "spoiler",
        }
    }
}

#[derive(Debug, Clone)]
enum Behaviour {
    Random,
    Zero,
    Greedy,
    Spoiler(ThresholdMap),
}

#[derive(Debug, Clone)]
pub struct Adversary {
    behaviour: Behaviour,
    seed: u64,
}

pub fn adversary_tender(
    graph: &Graph,
    kind: &AdversaryKind,
    seed: u64,
    config: &SolverConfig,
) -> Result<Adversary, RuntimeError> {
    let behaviour = match kind {
        AdversaryKind::Random => Behaviour::Random,
        AdversaryKind::Zero => Behaviour::Zero,
        AdversaryKind::Greedy => Behaviour::Greedy,
        AdversaryKind::Spoiler(objective) => Behaviour::Spoiler(solve_objective(graph, objective, config)?),
    };
    Ok(Adversary { behaviour, seed })
}

impl Adversary {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

fn first_successor(graph: &Graph, v: &str) -> Option<String> {
    let vi = graph.index_of(v)?;
    graph.successors(vi).first().map(|&u| graph.name(u).to_string())
}

/// Victim's base bid plus half of the spoiler's excess over `1 - th(v)`.
fn spoiler_bid(map: &ThresholdMap, v: &str, budget: &Rational) -> Rational {
    let (Some(lo), Some(hi), Some(th)) = (map.v_minus(v), map.v_plus(v), map.value(v)) else {
        return Rational::zero();
    };
    let base = (&map.values[hi] - &map.values[lo]) * half();
    let excess = budget - (Rational::one() - th);
    let extra = if excess.is_positive() { excess * half() } else { Rational::zero() };
    (base + extra).min(budget.clone())
}

impl TenderPolicy for Adversary {
    fn bid(&self, _graph: &Graph, history: &[Configuration], player: Player) -> Rational {
        let current = history.last().expect("non-empty history");
        let budget = current.budget_of(player);
        let step = (history.len() - 1) as u64;
        match &self.behaviour {
            Behaviour::Zero => Rational::zero(),
            Behaviour::Greedy if step == 0 => budget,
            Behaviour::Greedy => Rational::zero(),
            Behaviour::Random => {
                let k: i64 = self.rng(2 * step).gen_range(0..=1000);
                budget * ratio(k, 1000)
            }
            Behaviour::Spoiler(map) => spoiler_bid(map, &current.vertex, &budget),
        }
    }

    fn choose(&self, graph: &Graph, path: &[String]) -> Option<String> {
        let v = path.last()?;
        let succ = graph.successors(graph.index_of(v)?);
        match &self.behaviour {
            Behaviour::Random if !succ.is_empty() => {
                let step = (path.len() - 1) as u64;
                let i = self.rng(2 * step + 1).gen_range(0..succ.len());
                Some(graph.name(succ[i]).to_string())
            }
            Behaviour::Spoiler(map) => map.v_plus(v).map(str::to_string).or_else(|| first_successor(graph, v)),
            _ => first_successor(graph, v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::{run_composition, Verdict};
    use crate::synthesis::make_tender;

    fn fork_b() -> Graph {
        Graph::from_edges(
            &["a", "b", "c", "d", "e", "f", "g"],
            "a",
            &[("a", "b"), ("a", "e"), ("b", "c"), ("b", "d"), ("e", "f"), ("e", "g")],
        )
        .unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::exact()
    }

    #[test]
    fn random_is_reproducible() {
        let g = fork_b();
        let a = adversary_tender(&g, &AdversaryKind::Random, 42, &cfg()).unwrap();
        let b = adversary_tender(&g, &AdversaryKind::Random, 42, &cfg()).unwrap();
        let z = adversary_tender(&g, &AdversaryKind::Zero, 0, &cfg()).unwrap();
        let one = run_composition(&g, &z, &a, &ratio(1, 3), 10, &[]).unwrap();
        let two = run_composition(&g, &z, &b, &ratio(1, 3), 10, &[]).unwrap();
        assert_eq!(one.0, two.0);
    }

    #[test]
    fn zero_against_zero_follows_player_one() {
        let g = fork_b();
        let z = adversary_tender(&g, &AdversaryKind::Zero, 0, &cfg()).unwrap();
        let (trace, _) = run_composition(&g, &z, &z, &ratio(1, 2), 10, &[]).unwrap();
        assert!(trace.iter().all(|r| r.winner == Player::One));
        assert_eq!(trace.last().unwrap().next_vertex, "c");
    }

    #[test]
    fn greedy_spends_once() {
        let g = fork_b();
        let greedy = adversary_tender(&g, &AdversaryKind::Greedy, 0, &cfg()).unwrap();
        let z = adversary_tender(&g, &AdversaryKind::Zero, 0, &cfg()).unwrap();
        let (trace, _) = run_composition(&g, &z, &greedy, &ratio(1, 3), 10, &[]).unwrap();
        assert_eq!(trace[0].bid_2, ratio(2, 3));
        assert_eq!(trace[0].config_after.budget_1, Rational::one());
        assert!(trace[1..].iter().all(|r| r.bid_2.is_zero()));
    }

    #[test]
    fn spoiler_defeats_underfunded_blue() {
        let g = fork_b();
        let blue_obj = Objective::reach(["d", "g"]);
        let map = solve_objective(&g, &blue_obj, &cfg()).unwrap();
        let blue = make_tender(&g, &map).unwrap();
        let spoiler = adversary_tender(&g, &AdversaryKind::Spoiler(blue_obj.clone()), 0, &cfg()).unwrap();
        let budget = ratio(1, 2) - ratio(1, 100);
        let (_, verdicts) = run_composition(&g, &blue, &spoiler, &budget, 70, &[&blue_obj]).unwrap();
        assert_ne!(verdicts[0], Verdict::Satisfied);
    }
}

//! Exact thresholds by strategy iteration, one component at a time.
//!
//! Components are visited in reverse topological order so every edge leaving
//! the current component points at a solved vertex. Inside a cyclic
//! component the minimizer starts from a proper policy (one that leaves the
//! component from everywhere) and only ever switches to strictly better
//! successors, which keeps it proper; the maximizer best-responds by its own
//! policy iteration. Every linear system solved along the way is therefore
//! non-singular.

use std::collections::VecDeque;

use num::{One, Zero};

use crate::graph::Graph;
use crate::rational::{half, Rational};
use crate::scc::{is_cyclic, scc_decompose};

use super::linear;

/// `fixed[v]` pins absorbing and hopeless vertices; every other vertex must be
/// able to reach a vertex pinned at 0 without crossing a pinned vertex.
pub(crate) fn solve(graph: &Graph, fixed: &[Option<Rational>]) -> Vec<Rational> {
    let mut value: Vec<Option<Rational>> = fixed.to_vec();
    let free: Vec<bool> = fixed.iter().map(Option::is_none).collect();
    let open = graph.with_sinks(&free.iter().map(|f| !f).collect::<Vec<_>>());
    let scc = scc_decompose(&open);

    for comp in &scc.components {
        let comp: Vec<usize> = comp.iter().copied().filter(|&v| free[v]).collect();
        if comp.is_empty() {
            continue;
        }
        if !is_cyclic(&open, &comp) {
            let v = comp[0];
            let succ: Vec<&Rational> = graph
                .successors(v)
                .iter()
                .map(|&u| value[u].as_ref().expect("successor solved"))
                .collect();
            let hi = succ.iter().max().expect("free vertex has successors");
            let lo = succ.iter().min().expect("free vertex has successors");
            value[v] = Some((*hi + *lo) * half());
            continue;
        }
        let x = solve_component(graph, &comp, &value);
        for (&v, q) in comp.iter().zip(x) {
            value[v] = Some(q);
        }
    }
    value.into_iter().map(|q| q.expect("all vertices solved")).collect()
}

fn solve_component(graph: &Graph, comp: &[usize], known: &[Option<Rational>]) -> Vec<Rational> {
    let n = comp.len();
    let mut pos = vec![usize::MAX; graph.len()];
    for (i, &v) in comp.iter().enumerate() {
        pos[v] = i;
    }
    let inside = |u: usize| pos[u] != usize::MAX;

    let mut min_pol = proper_policy(graph, comp, &pos, known);
    let mut max_pol: Vec<usize> = comp.iter().map(|&v| graph.successors(v)[0]).collect();

    loop {
        let x = loop {
            let x = evaluate(comp, &pos, known, &max_pol, &min_pol);
            let val = |u: usize| -> &Rational {
                if inside(u) {
                    &x[pos[u]]
                } else {
                    known[u].as_ref().expect("exit solved")
                }
            };
            let mut changed = false;
            for (i, &v) in comp.iter().enumerate() {
                let best = best_by(graph.successors(v), &val, |a, b| a > b);
                if val(best) > val(max_pol[i]) {
                    max_pol[i] = best;
                    changed = true;
                }
            }
            if !changed {
                break x;
            }
        };
        let val = |u: usize| -> &Rational {
            if inside(u) {
                &x[pos[u]]
            } else {
                known[u].as_ref().expect("exit solved")
            }
        };
        let mut changed = false;
        for (i, &v) in comp.iter().enumerate() {
            let best = best_by(graph.successors(v), &val, |a, b| a < b);
            if val(best) < val(min_pol[i]) {
                min_pol[i] = best;
                changed = true;
            }
        }
        if !changed {
            debug_assert_eq!(x.len(), n);
            return x;
        }
    }
}

/// First successor that is strictly better than all earlier ones.
fn best_by<'a, F, C>(succ: &[usize], val: &F, better: C) -> usize
where
    F: Fn(usize) -> &'a Rational,
    C: Fn(&Rational, &Rational) -> bool,
{
    let mut best = succ[0];
    for &u in &succ[1..] {
        if better(val(u), val(best)) {
            best = u;
        }
    }
    best
}

/// Breadth-first policy towards the cheapest exit whose value is below one.
fn proper_policy(
    graph: &Graph,
    comp: &[usize],
    pos: &[usize],
    known: &[Option<Rational>],
) -> Vec<usize> {
    let one = Rational::one();
    let mut pol = vec![usize::MAX; comp.len()];
    let mut queue = VecDeque::new();
    for (i, &v) in comp.iter().enumerate() {
        let exit = graph
            .successors(v)
            .iter()
            .filter(|&&u| pos[u] == usize::MAX)
            .filter(|&&u| known[u].as_ref().is_some_and(|q| *q < one))
            .min_by(|&&a, &&b| known[a].cmp(&known[b]));
        if let Some(&u) = exit {
            pol[i] = u;
            queue.push_back(v);
        }
    }
    while let Some(w) = queue.pop_front() {
        for (i, &v) in comp.iter().enumerate() {
            if pol[i] == usize::MAX && graph.successors(v).contains(&w) {
                pol[i] = w;
                queue.push_back(v);
            }
        }
    }
    assert!(
        pol.iter().all(|&u| u != usize::MAX),
        "component contains a vertex that cannot reach a winning exit"
    );
    pol
}

/// Values of the component when the maximizer plays `hi` and the minimizer `lo`.
fn evaluate(
    comp: &[usize],
    pos: &[usize],
    known: &[Option<Rational>],
    hi: &[usize],
    lo: &[usize],
) -> Vec<Rational> {
    let n = comp.len();
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for i in 0..n {
        a[i][i] += Rational::from_integer(2.into());
        for u in [hi[i], lo[i]] {
            if pos[u] == usize::MAX {
                b[i] += known[u].as_ref().expect("exit solved");
            } else {
                a[i][pos[u]] -= Rational::one();
            }
        }
    }
    linear::solve(a, b).expect("proper minimizer policy gives a non-singular system")
}

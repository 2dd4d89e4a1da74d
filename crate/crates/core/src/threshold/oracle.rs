//! Brute-force reference solver for small reachability games.
//!
//! Shares no code with the main solvers: it has its own reachability test and
//! its own Gauss-Jordan elimination, and it simply tries every choice of an
//! unordered successor pair per vertex.

use std::collections::BTreeSet;

use num::{One, Zero};

use crate::error::SolverError;
use crate::graph::Graph;
use crate::rational::Rational;

use super::ThresholdMap;

pub const ORACLE_LIMIT: usize = 12;

pub fn brute_force_oracle(graph: &Graph, targets: &BTreeSet<String>) -> Result<ThresholdMap, SolverError> {
    let n = graph.len();
    if n > ORACLE_LIMIT {
        return Err(SolverError::OracleTooLarge {
            vertices: n,
            limit: ORACLE_LIMIT,
        });
    }
    let mut is_target = vec![false; n];
    for t in targets {
        let v = graph
            .index_of(t)
            .ok_or_else(|| crate::error::ObjectiveError::UnknownVertex(t.clone()))?;
        if !graph.successors(v).is_empty() {
            return Err(SolverError::NonSinkTarget(t.clone()));
        }
        is_target[v] = true;
    }

    let hopeful: Vec<bool> = (0..n)
        .map(|v| forward_closure(graph, v).iter().any(|&u| is_target[u]))
        .collect();
    let free: Vec<usize> = (0..n)
        .filter(|&v| hopeful[v] && !is_target[v])
        .collect();
    let choices: Vec<Vec<(usize, usize)>> = free.iter().map(|&v| pairs(graph.successors(v))).collect();

    let mut pick = vec![0usize; free.len()];
    loop {
        if let Some(x) = try_assignment(graph, &is_target, &hopeful, &free, &choices, &pick) {
            return Ok(to_map(graph, &x, &free, &choices, &pick, targets));
        }
        // odometer over the choice vector
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Err(SolverError::OracleInconsistent);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn forward_closure(graph: &Graph, start: usize) -> Vec<usize> {
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![start];
    let mut out = Vec::new();
    seen[start] = true;
    while let Some(v) = stack.pop() {
        out.push(v);
        for &u in graph.successors(v) {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    out
}

fn pairs(succ: &[usize]) -> Vec<(usize, usize)> {
    if succ.len() == 1 {
        return vec![(succ[0], succ[0])];
    }
    let mut out = Vec::new();
    for i in 0..succ.len() {
        for j in i + 1..succ.len() {
            out.push((succ[i], succ[j]));
        }
    }
    out
}

fn try_assignment(
    graph: &Graph,
    is_target: &[bool],
    hopeful: &[bool],
    free: &[usize],
    choices: &[Vec<(usize, usize)>],
    pick: &[usize],
) -> Option<Vec<Rational>> {
    let n = graph.len();
    // Rows: x_v = 0 for targets, 1 for hopeless vertices,
    // 2 x_v - x_a - x_b = 0 for free vertices.
    let mut m = vec![vec![Rational::zero(); n + 1]; n];
    for v in 0..n {
        m[v][v] = Rational::one();
        if !is_target[v] && !hopeful[v] {
            m[v][n] = Rational::one();
        }
    }
    for (k, &v) in free.iter().enumerate() {
        let (a, b) = choices[k][pick[k]];
        m[v][v] = Rational::from_integer(2.into());
        m[v][a] -= Rational::one();
        m[v][b] -= Rational::one();
    }
    let x = gauss_jordan(m)?;
    for &v in free {
        let succ = graph.successors(v);
        let lo = succ.iter().map(|&u| &x[u]).min()?;
        let hi = succ.iter().map(|&u| &x[u]).max()?;
        if x[v] != (lo + hi) / Rational::from_integer(2.into()) {
            return None;
        }
    }
    Some(x)
}

fn gauss_jordan(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let lead = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &lead;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

fn to_map(
    graph: &Graph,
    x: &[Rational],
    free: &[usize],
    choices: &[Vec<(usize, usize)>],
    pick: &[usize],
    targets: &BTreeSet<String>,
) -> ThresholdMap {
    let mut map = ThresholdMap::default();
    for v in 0..graph.len() {
        map.values.insert(graph.name(v).to_string(), x[v].clone());
    }
    for (k, &v) in free.iter().enumerate() {
        let (a, b) = choices[k][pick[k]];
        let (lo, hi) = if x[a] <= x[b] { (a, b) } else { (b, a) };
        map.witness
            .insert(graph.name(v).to_string(), (graph.name(lo).to_string(), graph.name(hi).to_string()));
    }
    map.targets = targets.clone();
    map
}

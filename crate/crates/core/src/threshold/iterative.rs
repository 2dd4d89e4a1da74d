//! Floating-point value iteration from above.

use crate::graph::Graph;

/// Jacobi sweeps of the averaging operator. Free vertices start at 1, so the
/// sequence is pointwise non-increasing.
#[derive(Debug, Clone)]
pub struct Sweeps<'g> {
    graph: &'g Graph,
    fixed: Vec<Option<f64>>,
    current: Vec<f64>,
}

impl<'g> Sweeps<'g> {
    pub(crate) fn new(graph: &'g Graph, fixed: Vec<Option<f64>>) -> Self {
        let current = fixed.iter().map(|f| f.unwrap_or(1.0)).collect();
        Sweeps {
            graph,
            fixed,
            current,
        }
    }

    pub fn current(&self) -> &[f64] {
        &self.current
    }
}

/// One item per sweep: the new values and the sup-norm change.
impl Iterator for Sweeps<'_> {
    type Item = (Vec<f64>, f64);

    fn next(&mut self) -> Option<Self::Item> {
        let x = &self.current;
        let next: Vec<f64> = (0..self.graph.len())
            .map(|v| match self.fixed[v] {
                Some(f) => f,
                None => {
                    let succ = self.graph.successors(v);
                    let (lo, hi) = succ.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| {
                        (lo.min(x[u]), hi.max(x[u]))
                    });
                    0.5 * (lo + hi)
                }
            })
            .collect();
        let residual = next
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        self.current = next.clone();
        Some((next, residual))
    }
}

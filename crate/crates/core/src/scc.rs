//! Strongly connected components and bottom components.

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Components in reverse topological order: every edge leaving a
    /// component points into one listed earlier.
    pub components: Vec<Vec<usize>>,
    pub is_bottom: Vec<bool>,
    pub component_of: Vec<usize>,
}

impl SccDecomposition {
    pub fn bottoms(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.components
            .iter()
            .zip(&self.is_bottom)
            .filter(|(_, &b)| b)
            .map(|(c, _)| c)
    }

    pub fn in_bottom(&self, v: usize) -> bool {
        self.is_bottom[self.component_of[v]]
    }
}

/// A component is non-trivial when it contains a cycle (more than one
/// vertex, or a self-loop).
pub fn is_cyclic(graph: &Graph, component: &[usize]) -> bool {
    component.len() > 1 || graph.has_edge(component[0], component[0])
}

/// Iterative Tarjan.
pub fn scc_decompose(graph: &Graph) -> SccDecomposition {
    const UNSEEN: usize = usize::MAX;
    let n = graph.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut component_of = vec![UNSEEN; n];

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position in its successor list)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = graph.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }

    let is_bottom = components
        .iter()
        .enumerate()
        .map(|(id, comp)| {
            comp.iter()
                .all(|&v| graph.successors(v).iter().all(|&u| component_of[u] == id))
        })
        .collect();

    SccDecomposition {
        components,
        is_bottom,
        component_of,
    }
}

//! Finite directed graphs with a designated initial vertex.
//!
//! Vertices carry opaque string names; internally they are dense indices in
//! input order. Successor lists keep input order so every downstream
//! tie-break is deterministic.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Raw, unchecked graph description; the JSON wire format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphData {
    pub vertices: Vec<String>,
    pub initial: String,
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertex(String),
    MissingInitial(String),
    DanglingEdge { from: String, to: String },
    DuplicateSuccessor { from: String, to: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex {v:?}"),
            Violation::MissingInitial(v) => write!(f, "missing initial vertex {v:?}"),
            Violation::DanglingEdge { from, to } => write!(f, "dangling edge {from:?} -> {to:?}"),
            Violation::DuplicateSuccessor { from, to } => {
                write!(f, "duplicate successor {from:?} -> {to:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl GraphData {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                report.violations.push(Violation::DuplicateVertex(v.clone()));
            }
        }
        if !seen.contains(self.initial.as_str()) {
            report
                .violations
                .push(Violation::MissingInitial(self.initial.clone()));
        }
        let mut edges = HashSet::new();
        for (from, to) in &self.edges {
            if !seen.contains(from.as_str()) || !seen.contains(to.as_str()) {
                report.violations.push(Violation::DanglingEdge {
                    from: from.clone(),
                    to: to.clone(),
                });
            } else if !edges.insert((from.as_str(), to.as_str())) {
                report.violations.push(Violation::DuplicateSuccessor {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    succ: Vec<Vec<usize>>,
    initial: usize,
}

impl TryFrom<GraphData> for Graph {
    type Error = GraphError;

    fn try_from(data: GraphData) -> Result<Self, GraphError> {
        let report = data.validate();
        if !report.is_ok() {
            return Err(GraphError::Invalid(report));
        }
        let index: HashMap<String, usize> = data
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut succ = vec![Vec::new(); data.vertices.len()];
        for (from, to) in &data.edges {
            succ[index[from]].push(index[to]);
        }
        let initial = index[&data.initial];
        Ok(Graph {
            names: data.vertices,
            index,
            succ,
            initial,
        })
    }
}

impl Graph {
    /// Convenience constructor for literal graphs.
    pub fn from_edges(vertices: &[&str], initial: &str, edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        GraphData {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            initial: initial.to_string(),
            edges: edges
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
        .try_into()
    }

    pub(crate) fn from_parts(names: Vec<String>, succ: Vec<Vec<usize>>, initial: usize) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        Graph {
            names,
            index,
            succ,
            initial,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let data: GraphData = serde_json::from_str(s)?;
        data.try_into()
    }

    pub fn to_data(&self) -> GraphData {
        GraphData {
            vertices: self.names.clone(),
            initial: self.names[self.initial].clone(),
            edges: self.edges().map(|(a, b)| (self.names[a].clone(), self.names[b].clone())).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_data()).expect("graph serializes")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.succ[from].contains(&to)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.succ[v].is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(v, ss)| ss.iter().map(move |&u| (v, u)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, u) in self.edges() {
            pred[u].push(v);
        }
        pred
    }

    /// Every out-degree is at most two.
    pub fn is_binary(&self) -> bool {
        self.succ.iter().all(|s| s.len() <= 2)
    }

    pub fn mask(&self, set: &BTreeSet<usize>) -> Vec<bool> {
        let mut m = vec![false; self.len()];
        for &v in set {
            m[v] = true;
        }
        m
    }

    /// Backward BFS: vertices from which some path reaches `targets`.
    pub fn reachable_to_mask(&self, targets: &[bool]) -> Vec<bool> {
        let pred = self.predecessors();
        let mut seen = targets.to_vec();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&v| targets[v]).collect();
        while let Some(u) = queue.pop_front() {
            for &v in &pred[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn reachable_to(&self, targets: &BTreeSet<usize>) -> BTreeSet<usize> {
        let m = self.reachable_to_mask(&self.mask(targets));
        (0..self.len()).filter(|&v| m[v]).collect()
    }

    /// Forward BFS from `start`.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.succ[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Induced sub-graph on the vertices with `keep[v]`; `None` when the
    /// initial vertex is dropped.
    pub fn induced(&self, keep: &[bool]) -> Option<Graph> {
        if !keep[self.initial] {
            return None;
        }
        let mut remap = vec![usize::MAX; self.len()];
        let mut names = Vec::new();
        for v in 0..self.len() {
            if keep[v] {
                remap[v] = names.len();
                names.push(self.names[v].clone());
            }
        }
        let succ = (0..self.len())
            .filter(|&v| keep[v])
            .map(|v| {
                self.succ[v]
                    .iter()
                    .filter(|&&u| keep[u])
                    .map(|&u| remap[u])
                    .collect()
            })
            .collect();
        Some(Graph::from_parts(names, succ, remap[self.initial]))
    }

    pub fn restrict_to_reachable(&self) -> Graph {
        self.induced(&self.reachable_from(self.initial))
            .expect("initial vertex reaches itself")
    }

    /// Same graph with every vertex in `sinks` stripped of its outgoing edges.
    pub fn with_sinks(&self, sinks: &[bool]) -> Graph {
        let succ = self
            .succ
            .iter()
            .enumerate()
            .map(|(v, s)| if sinks[v] { Vec::new() } else { s.clone() })
            .collect();
        Graph::from_parts(self.names.clone(), succ, self.initial)
    }

    /// Index translation into another graph that shares vertex names.
    pub fn translate(&self, v: usize, other: &Graph) -> Option<usize> {
        other.index_of(&self.names[v])
    }

    pub fn names_of(&self, set: impl IntoIterator<Item = usize>) -> BTreeSet<String> {
        set.into_iter().map(|v| self.names[v].clone()).collect()
    }
}

/// Styling for DOT export.
#[derive(Debug, Clone, Default)]
pub struct DotStyle {
    pub targets_1: BTreeSet<usize>,
    pub targets_2: BTreeSet<usize>,
    /// Edges chosen by the first (blue) and second (red) tender.
    pub chosen_1: BTreeSet<(usize, usize)>,
    pub chosen_2: BTreeSet<(usize, usize)>,
    /// Path actually taken by a composition.
    pub path: Vec<usize>,
}

impl Graph {
    /// Graphviz rendering: blue and red fill for the two target sets, purple
    /// for their overlap; chosen edges get a colored shadow, the taken path
    /// is drawn thick.
    pub fn to_dot(&self, style: &DotStyle) -> String {
        let mut out = String::from("digraph G {\n  rankdir=LR;\n  node [shape=circle];\n");
        out.push_str(&format!("  __init [shape=point];\n  __init -> \"{}\";\n", self.names[self.initial]));
        for v in 0..self.len() {
            let fill = match (style.targets_1.contains(&v), style.targets_2.contains(&v)) {
                (true, true) => Some("plum"),
                (true, false) => Some("lightblue"),
                (false, true) => Some("lightpink"),
                (false, false) => None,
            };
            match fill {
                Some(c) => out.push_str(&format!(
                    "  \"{}\" [style=filled, fillcolor={c}];\n",
                    self.names[v]
                )),
                None => out.push_str(&format!("  \"{}\";\n", self.names[v])),
            }
        }
        let taken: HashSet<(usize, usize)> = style.path.windows(2).map(|w| (w[0], w[1])).collect();
        for (v, u) in self.edges() {
            let mut attrs = Vec::new();
            match (style.chosen_1.contains(&(v, u)), style.chosen_2.contains(&(v, u))) {
                (true, true) => attrs.push("color=purple"),
                (true, false) => attrs.push("color=blue"),
                (false, true) => attrs.push("color=red"),
                (false, false) => {}
            }
            if taken.contains(&(v, u)) {
                attrs.push("penwidth=3");
            }
            if attrs.is_empty() {
                out.push_str(&format!("  \"{}\" -> \"{}\";\n", self.names[v], self.names[u]));
            } else {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [{}];\n",
                    self.names[v],
                    self.names[u],
                    attrs.join(", ")
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

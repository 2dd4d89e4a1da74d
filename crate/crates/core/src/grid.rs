//! One-way grid worlds.
//!
//! Every free cell is a vertex named `r{row}c{col}`. A move goes to an
//! orthogonal free neighbour of strictly higher rank, so the graph is
//! acyclic. The default rank is the Manhattan distance from the start.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GridError;
use crate::graph::Graph;
use crate::objective::Objective;
use crate::sinkify::sinkify;

pub type Cell = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub obstacles: BTreeSet<Cell>,
    pub start: Cell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<Vec<Vec<u32>>>,
    pub targets_1: BTreeSet<Cell>,
    pub targets_2: BTreeSet<Cell>,
}

#[derive(Debug, Clone)]
pub struct GridInstance {
    pub graph: Graph,
    pub objective_1: Objective,
    pub objective_2: Objective,
    /// Free non-target cells without a legal move.
    pub dead_cells: Vec<String>,
    /// Whether the objectives were moved onto the three-copy product.
    pub sinkified: bool,
}

pub fn cell_name((r, c): Cell) -> String {
    format!("r{r}c{c}")
}

/// Inverse of [`cell_name`]; also accepts product names such as `r1c2@⊥`.
pub fn parse_cell(name: &str) -> Option<Cell> {
    let base = name.split('@').next()?;
    let rest = base.strip_prefix('r')?;
    let (r, c) = rest.split_once('c')?;
    Some((r.parse().ok()?, c.parse().ok()?))
}

impl GridSpec {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid spec serializes")
    }

    fn inside(&self, (r, c): Cell) -> bool {
        r < self.rows && c < self.cols
    }

    fn rank_of(&self, (r, c): Cell) -> u32 {
        match &self.rank {
            Some(table) => table[r][c],
            None => (r.abs_diff(self.start.0) + c.abs_diff(self.start.1)) as u32,
        }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(GridError::Empty);
        }
        let cells = self
            .obstacles
            .iter()
            .chain(&self.targets_1)
            .chain(&self.targets_2)
            .chain(std::iter::once(&self.start));
        for &cell in cells {
            if !self.inside(cell) {
                return Err(GridError::OutOfBounds(cell.0, cell.1));
            }
        }
        if self.obstacles.contains(&self.start) {
            return Err(GridError::StartBlocked(self.start.0, self.start.1));
        }
        if let Some(&t) = self.targets_1.iter().chain(&self.targets_2).find(|t| self.obstacles.contains(t)) {
            return Err(GridError::TargetBlocked(t.0, t.1));
        }
        if let Some(table) = &self.rank {
            if table.len() != self.rows || table.iter().any(|row| row.len() != self.cols) {
                return Err(GridError::RankShape);
            }
        }
        Ok(())
    }

    fn moves(&self, (r, c): Cell) -> Vec<Cell> {
        let mut out = Vec::new();
        let here = self.rank_of((r, c));
        let cand = [
            (r.wrapping_sub(1), c),
            (r + 1, c),
            (r, c.wrapping_sub(1)),
            (r, c + 1),
        ];
        for n in cand {
            if self.inside(n) && !self.obstacles.contains(&n) && self.rank_of(n) > here {
                out.push(n);
            }
        }
        out
    }
}

pub fn grid_to_graph(spec: &GridSpec) -> Result<GridInstance, GridError> {
    spec.validate()?;
    let free: Vec<Cell> = (0..spec.rows)
        .flat_map(|r| (0..spec.cols).map(move |c| (r, c)))
        .filter(|cell| !spec.obstacles.contains(cell))
        .collect();
    let names: Vec<String> = free.iter().map(|&c| cell_name(c)).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let edge_names: Vec<(String, String)> = free
        .iter()
        .flat_map(|&from| spec.moves(from).into_iter().map(move |to| (cell_name(from), cell_name(to))))
        .collect();
    let edges: Vec<(&str, &str)> = edge_names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let graph = Graph::from_edges(&name_refs, &cell_name(spec.start), &edges).expect("grid graph is well formed");

    let objective_1 = Objective::reach(spec.targets_1.iter().map(|&c| cell_name(c)));
    let objective_2 = Objective::reach(spec.targets_2.iter().map(|&c| cell_name(c)));
    let is_target = |c: &Cell| spec.targets_1.contains(c) || spec.targets_2.contains(c);
    let dead_cells = free
        .iter()
        .filter(|c| !is_target(c) && spec.moves(**c).is_empty())
        .map(|&c| cell_name(c))
        .collect();
    let all_sinks = free.iter().filter(|c| is_target(c)).all(|&c| spec.moves(c).is_empty());
    if all_sinks {
        return Ok(GridInstance {
            graph,
            objective_1,
            objective_2,
            dead_cells,
            sinkified: false,
        });
    }
    let s = sinkify(&graph, &objective_1, &objective_2).expect("reach objectives");
    let product = s.graph.restrict_to_reachable();
    Ok(GridInstance {
        objective_1: s.objective_1.restrict_to(&product),
        objective_2: s.objective_2.restrict_to(&product),
        graph: product,
        dead_cells,
        sinkified: true,
    })
}

/// Random grid: start in the top-left corner, a shared target in the
/// bottom-right corner and one private target per objective.
pub fn generate_grid(rows: usize, cols: usize, density: f64, seed: u64) -> Result<GridSpec, GridError> {
    if rows == 0 || cols == 0 {
        return Err(GridError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = (0, 0);
    let corner = (rows - 1, cols - 1);
    let pick = |rng: &mut ChaCha8Rng| (rng.gen_range(0..rows), rng.gen_range(0..cols));
    let t1 = pick(&mut rng);
    let t2 = pick(&mut rng);
    let keep: BTreeSet<Cell> = [start, corner, t1, t2].into_iter().collect();
    let obstacles = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .filter(|cell| !keep.contains(cell))
        .filter(|_| rng.gen_bool(density.clamp(0.0, 1.0)))
        .collect();
    let spec = GridSpec {
        rows,
        cols,
        obstacles,
        start,
        rank: None,
        targets_1: [t1, corner].into_iter().filter(|&c| c != start).collect(),
        targets_2: [t2, corner].into_iter().filter(|&c| c != start).collect(),
    };
    let inst = grid_to_graph(&spec)?;
    let m1 = inst.objective_1.reach_mask(&inst.graph).expect("reach");
    let m2 = inst.objective_2.reach_mask(&inst.graph).expect("reach");
    let targets: BTreeSet<usize> = (0..inst.graph.len()).filter(|&v| m1[v] || m2[v]).collect();
    if !inst.graph.reachable_to(&targets).contains(&inst.graph.initial()) {
        return Err(GridError::DisconnectedStart);
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(rows: usize, cols: usize, t1: &[Cell], t2: &[Cell]) -> GridSpec {
        GridSpec {
            rows,
            cols,
            obstacles: BTreeSet::new(),
            start: (0, 0),
            rank: None,
            targets_1: t1.iter().copied().collect(),
            targets_2: t2.iter().copied().collect(),
        }
    }

    fn topo_sortable(g: &Graph) -> bool {
        let mut indeg = vec![0; g.len()];
        for (_, u) in g.edges() {
            indeg[u] += 1;
        }
        let mut stack: Vec<usize> = (0..g.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &u in g.successors(v) {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    stack.push(u);
                }
            }
        }
        seen == g.len()
    }

    #[test]
    fn one_by_two() {
        let inst = grid_to_graph(&spec(1, 2, &[(0, 1)], &[(0, 1)])).unwrap();
        assert_eq!(inst.graph.len(), 2);
        assert_eq!(inst.graph.edge_count(), 1);
        assert!(!inst.sinkified);
    }

    #[test]
    fn two_by_two_is_binary_dag() {
        let inst = grid_to_graph(&spec(2, 2, &[(1, 1)], &[(1, 1)])).unwrap();
        assert_eq!(inst.graph.len(), 4);
        assert!(inst.graph.is_binary());
        assert!(topo_sortable(&inst.graph));
    }

    #[test]
    fn blocked_start() {
        let mut s = spec(2, 2, &[(1, 1)], &[(1, 1)]);
        s.obstacles.insert((0, 0));
        assert_eq!(grid_to_graph(&s).unwrap_err(), GridError::StartBlocked(0, 0));
    }

    #[test]
    fn dead_cells_reported() {
        let mut s = spec(2, 3, &[(1, 2)], &[(1, 2)]);
        s.obstacles.insert((1, 1));
        s.obstacles.insert((0, 2));
        let inst = grid_to_graph(&s).unwrap();
        assert_eq!(inst.dead_cells, vec!["r0c1".to_string(), "r1c0".to_string()]);
    }

    #[test]
    fn non_sink_targets_are_sinkified() {
        let inst = grid_to_graph(&spec(1, 3, &[(0, 1)], &[(0, 2)])).unwrap();
        assert!(inst.sinkified);
        assert_eq!(inst.graph.name(inst.graph.initial()), "r0c0@⊥");
        assert!(topo_sortable(&inst.graph));
    }

    #[test]
    fn generator_is_deterministic_and_acyclic() {
        for seed in 0..40 {
            let a = generate_grid(8, 8, 0.15, seed);
            assert_eq!(a, generate_grid(8, 8, 0.15, seed));
            if let Ok(spec) = a {
                let inst = grid_to_graph(&spec).unwrap();
                assert!(inst.graph.to_data().validate().is_ok());
                assert!(topo_sortable(&inst.graph));
            }
        }
    }

    #[test]
    fn cell_names_round_trip() {
        assert_eq!(parse_cell(&cell_name((3, 12))), Some((3, 12)));
        assert_eq!(parse_cell("r1c2@⊥"), Some((1, 2)));
        assert_eq!(parse_cell("x"), None);
    }

    #[test]
    fn json_round_trip() {
        let s = generate_grid(5, 5, 0.1, 3).unwrap();
        assert_eq!(GridSpec::from_json(&s.to_json()).unwrap(), s);
    }
}

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::ObjectiveError;
use crate::graph::Graph;

/// Vertex-based objectives. Parity uses the max-even convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Objective {
    Reach { set: BTreeSet<String> },
    Safety { set: BTreeSet<String> },
    Buchi { set: BTreeSet<String> },
    Parity { coloring: BTreeMap<String, u32> },
}

impl Objective {
    pub fn reach<I: IntoIterator<Item = S>, S: Into<String>>(set: I) -> Self {
        Objective::Reach {
            set: set.into_iter().map(Into::into).collect(),
        }
    }

    pub fn safety<I: IntoIterator<Item = S>, S: Into<String>>(set: I) -> Self {
        Objective::Safety {
            set: set.into_iter().map(Into::into).collect(),
        }
    }

    pub fn buchi<I: IntoIterator<Item = S>, S: Into<String>>(set: I) -> Self {
        Objective::Buchi {
            set: set.into_iter().map(Into::into).collect(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Objective::Reach { .. } => "reach",
            Objective::Safety { .. } => "safety",
            Objective::Buchi { .. } => "buchi",
            Objective::Parity { .. } => "parity",
        }
    }

    pub fn validate(&self, graph: &Graph) -> Result<(), ObjectiveError> {
        match self {
            Objective::Reach { set } | Objective::Safety { set } | Objective::Buchi { set } => {
                for v in set {
                    graph
                        .index_of(v)
                        .ok_or_else(|| ObjectiveError::UnknownVertex(v.clone()))?;
                }
            }
            Objective::Parity { coloring } => {
                for v in coloring.keys() {
                    graph
                        .index_of(v)
                        .ok_or_else(|| ObjectiveError::UnknownVertex(v.clone()))?;
                }
                for v in graph.names() {
                    if !coloring.contains_key(v) {
                        return Err(ObjectiveError::MissingColor(v.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Membership mask of the vertex set; parity objectives have none.
    pub fn set_mask(&self, graph: &Graph) -> Result<Vec<bool>, ObjectiveError> {
        self.validate(graph)?;
        match self {
            Objective::Reach { set } | Objective::Safety { set } | Objective::Buchi { set } => {
                let mut m = vec![false; graph.len()];
                for v in set {
                    m[graph.index_of(v).expect("validated")] = true;
                }
                Ok(m)
            }
            Objective::Parity { .. } => Err(ObjectiveError::WrongKind {
                expected: "set-based",
                found: "parity",
            }),
        }
    }

    pub fn reach_mask(&self, graph: &Graph) -> Result<Vec<bool>, ObjectiveError> {
        match self {
            Objective::Reach { .. } => self.set_mask(graph),
            other => Err(ObjectiveError::WrongKind {
                expected: "reach",
                found: other.kind_name(),
            }),
        }
    }

    /// Colors per vertex; Büchi is encoded as accepting = 2, rejecting = 1.
    pub fn parity_colors(&self, graph: &Graph) -> Result<Vec<u32>, ObjectiveError> {
        self.validate(graph)?;
        match self {
            Objective::Buchi { set } => Ok(graph
                .names()
                .iter()
                .map(|v| if set.contains(v) { 2 } else { 1 })
                .collect()),
            Objective::Parity { coloring } => Ok(graph.names().iter().map(|v| coloring[v]).collect()),
            other => Err(ObjectiveError::WrongKind {
                expected: "buchi or parity",
                found: other.kind_name(),
            }),
        }
    }

    /// Same objective restricted to the vertices present in `graph`.
    pub fn restrict_to(&self, graph: &Graph) -> Objective {
        let keep = |set: &BTreeSet<String>| -> BTreeSet<String> {
            set.iter().filter(|v| graph.index_of(v).is_some()).cloned().collect()
        };
        match self {
            Objective::Reach { set } => Objective::Reach { set: keep(set) },
            Objective::Safety { set } => Objective::Safety { set: keep(set) },
            Objective::Buchi { set } => Objective::Buchi { set: keep(set) },
            Objective::Parity { coloring } => Objective::Parity {
                coloring: coloring
                    .iter()
                    .filter(|(v, _)| graph.index_of(v).is_some())
                    .map(|(v, &c)| (v.clone(), c))
                    .collect(),
            },
        }
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("objective serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let o = Objective::from_json(r#"{"kind":"reach","set":["c","d","g"]}"#).unwrap();
        assert_eq!(o, Objective::reach(["c", "d", "g"]));
        let p = Objective::from_json(r#"{"kind":"parity","coloring":{"a":2,"b":1}}"#).unwrap();
        assert_eq!(p.kind_name(), "parity");
        assert_eq!(Objective::from_json(&o.to_json()).unwrap(), o);
    }

    #[test]
    fn validation_catches_unknown_and_partial_coloring() {
        let g = Graph::from_edges(&["a", "b"], "a", &[("a", "b")]).unwrap();
        assert_eq!(
            Objective::reach(["z"]).validate(&g),
            Err(ObjectiveError::UnknownVertex("z".into()))
        );
        let p = Objective::Parity {
            coloring: BTreeMap::from([("a".to_string(), 1)]),
        };
        assert_eq!(p.validate(&g), Err(ObjectiveError::MissingColor("b".into())));
    }

    #[test]
    fn buchi_encodes_as_parity() {
        let g = Graph::from_edges(&["a", "b"], "a", &[("a", "b"), ("b", "b")]).unwrap();
        assert_eq!(Objective::buchi(["b"]).parity_colors(&g).unwrap(), vec![1, 2]);
        assert!(Objective::reach(["b"]).parity_colors(&g).is_err());
    }
}

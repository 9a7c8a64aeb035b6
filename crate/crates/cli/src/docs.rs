//! The JSON documents read and written by the command line.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use trichoose::choose::DecompositionStep;
use trichoose::color::{ListAssignment, MultiColoring, ProblemParams, Violation, WeightFn};
use trichoose::lattice::{Coord, LatticeGraph};

use crate::error::CliError;

/// Color ids above this are refused: sets are bitsets sized by their largest id.
pub const MAX_COLOR_ID: u32 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<Coord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListsDoc {
    pub lists: ListAssignment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDoc {
    pub coloring: MultiColoring,
}

/// Output of `solve`: the coloring plus the steps that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveDoc {
    pub params: ProblemParams,
    pub coloring: MultiColoring,
    pub trace: Vec<DecompositionStep>,
}

/// A weighted path or cycle for the exact oracle. Without `weights` every
/// vertex gets the demand given on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDoc {
    pub lists: ListAssignment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightFn>,
    #[serde(default)]
    pub cycle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<MultiColoring>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
    /// Coordinates of the vertices named by `violation`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub at: Vec<Coord>,
}

impl GraphDoc {
    pub fn from_graph(graph: &LatticeGraph) -> Self {
        GraphDoc {
            vertices: graph.vertices().collect(),
        }
    }

    pub fn into_graph(self) -> Result<LatticeGraph, CliError> {
        LatticeGraph::new(self.vertices).map_err(|e| CliError::Malformed(e.to_string()))
    }
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.into(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

/// Writes to `path`, or to stdout without one.
pub fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), CliError> {
    let text = to_json(value);
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io {
            path: p.into(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn check_color_ids<'a>(
    sets: impl IntoIterator<Item = &'a trichoose::color::ColorSet>,
) -> Result<(), CliError> {
    for (i, set) in sets.into_iter().enumerate() {
        if let Some(c) = set.max().filter(|c| c.0 > MAX_COLOR_ID) {
            return Err(CliError::Malformed(format!(
                "set {i} uses color {c}, ids above {MAX_COLOR_ID} are not supported"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use trichoose::color::ColorSet;

    fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(value: T) {
        let back: T = serde_json::from_str(&to_json(&value)).unwrap();
        assert_eq!(back, value);
    }

    #[test]
    fn documents_round_trip() {
        round_trip(GraphDoc {
            vertices: vec![Coord::new(0, 0), Coord::new(-3, 2)],
        });
        let lists = ListAssignment(vec![
            ColorSet::from_ids([1, 5]),
            ColorSet::new(),
            ColorSet::from_ids([70, 2]),
        ]);
        round_trip(ListsDoc {
            lists: lists.clone(),
        });
        round_trip(ColoringDoc {
            coloring: MultiColoring(lists.clone().into_inner()),
        });
        round_trip(OracleDoc {
            lists,
            weights: Some(WeightFn(vec![1, 0, 2])),
            cycle: true,
        });
    }

    #[test]
    fn graph_format() {
        let doc: GraphDoc = serde_json::from_str(r#"{"vertices": [[0, 0], [1, -1]]}"#).unwrap();
        assert_eq!(doc.vertices, vec![Coord::new(0, 0), Coord::new(1, -1)]);
        assert!(serde_json::from_str::<ListsDoc>(r#"{"lists": [[1, 1]]}"#).is_err());
    }
}

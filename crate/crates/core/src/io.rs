//! Graph file format and small text parsers.
//!
//! A graph file is a JSON object
//!
//! ```text
//! { "vertices": 3, "edges": [[1, 2, 0.5], [2, 3, 1.5]],
//!   "potentials": [0, 0, 0], "lengths": [1.0, 2.0] }
//! ```
//!
//! with 1-based vertex ids. `potentials` (one per vertex) and `lengths` (one
//! per edge, in edge order) are optional.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, WeightedGraph};

/// Dense matrices are used throughout, so graph files are capped well below
/// anything that would not fit in memory.
pub const MAX_VERTICES: usize = 2048;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("graph has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("edge #{edge} uses vertex id 0; vertex ids are 1-based")]
    ZeroVertexId { edge: usize },
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("expected {expected} edge lengths, got {got}")]
    LengthCount { expected: usize, got: usize },
    #[error("edge #{edge} has length {length}; lengths must be finite and strictly positive")]
    BadLength { edge: usize, length: f64 },
    #[error("item {index} of the list {text:?} is not a finite real number")]
    BadNumber { index: usize, text: String },
    #[error("empty list")]
    EmptyList,
}

/// On-disk shape of a graph file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potentials: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
}

/// A validated graph read from a file, with optional edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub lengths: Option<Vec<f64>>,
}

impl GraphFile {
    pub fn from_graph(graph: &WeightedGraph, lengths: Option<Vec<f64>>) -> Self {
        let potentials = graph.potentials();
        Self {
            vertices: graph.vertex_count(),
            edges: graph.edges().iter().map(|e| (e.u + 1, e.v + 1, e.weight)).collect(),
            potentials: potentials.iter().any(|&p| p != 0.0).then(|| potentials.to_vec()),
            lengths,
        }
    }

    pub fn into_graph(self) -> Result<LoadedGraph, ParseError> {
        if self.vertices > MAX_VERTICES {
            return Err(ParseError::TooManyVertices(self.vertices));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (idx, &(u, v, w)) in self.edges.iter().enumerate() {
            if u == 0 || v == 0 {
                return Err(ParseError::ZeroVertexId { edge: idx + 1 });
            }
            edges.push((u - 1, v - 1, w));
        }
        let graph = WeightedGraph::new(self.vertices, edges, self.potentials).map_err(describe)?;
        if let Some(lengths) = &self.lengths {
            if lengths.len() != graph.edge_count() {
                return Err(ParseError::LengthCount {
                    expected: graph.edge_count(),
                    got: lengths.len(),
                });
            }
            if let Some(i) = lengths.iter().position(|l| !(*l > 0.0 && l.is_finite())) {
                return Err(ParseError::BadLength {
                    edge: i + 1,
                    length: lengths[i],
                });
            }
        }
        Ok(LoadedGraph {
            graph,
            lengths: self.lengths,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph file serializes")
    }
}

/// Renders construction errors with the file's 1-based numbering.
fn describe(err: GraphError) -> ParseError {
    let msg = match err {
        GraphError::Empty => "graph must have at least one vertex".to_string(),
        GraphError::LoopEdge { edge, vertex } => format!("edge #{} is a loop at vertex {}", edge + 1, vertex + 1),
        GraphError::NonPositiveWeight { edge, weight } => {
            format!(
                "edge #{} has weight {weight}; weights must be finite and strictly positive",
                edge + 1
            )
        }
        GraphError::DuplicateEdge { edge, u, v } => {
            format!("edge #{} repeats the vertex pair ({}, {})", edge + 1, u + 1, v + 1)
        }
        GraphError::BadVertexId {
            edge,
            vertex,
            vertex_count,
        } => format!(
            "edge #{} names vertex {}, but the graph has {vertex_count} vertices",
            edge + 1,
            vertex + 1
        ),
        GraphError::NonFinitePotential { vertex } => format!("potential at vertex {} is not finite", vertex + 1),
        other => other.to_string(),
    };
    ParseError::Graph(msg)
}

/// Parses and validates a graph file.
pub fn parse_graph_file(text: &str) -> Result<LoadedGraph, ParseError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_graph()
}

/// Parses a comma-separated list of finite reals such as `1,2.5,-3e-1`.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::EmptyList);
    }
    text.split(',')
        .enumerate()
        .map(|(index, item)| {
            item.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ParseError::BadNumber {
                    index,
                    text: text.to_string(),
                })
        })
        .collect()
}

//! Weighted graphs and their generalized Laplacians.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: usize, vertex: usize },
    #[error("edge {edge} has weight {weight}; weights must be finite and strictly positive")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("edge {edge} repeats the vertex pair ({u}, {v})")]
    DuplicateEdge { edge: usize, u: usize, v: usize },
    #[error("edge {edge} names vertex {vertex}, but the graph has {vertex_count} vertices")]
    BadVertexId {
        edge: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("expected {expected} potentials, got {got}")]
    PotentialCount { expected: usize, got: usize },
    #[error("potential at vertex {vertex} is not finite")]
    NonFinitePotential { vertex: usize },
    #[error("edge labels must be three distinct positive weights, got {0:?}")]
    BadLabels([f64; 3]),
    #[error("parent graph uses {0} distinct edge weights; at most three labels are allowed")]
    TooManyLabels(usize),
    #[error("parent edge {edge} has weight {weight}, which is none of the three labels")]
    UnknownLabel { edge: usize, weight: f64 },
    #[error("parent edges {first} and {second} share vertex {vertex} and carry the same label")]
    NotThreeColored { first: usize, second: usize, vertex: usize },
    #[error("matrix is not a generalized Laplacian: {0}")]
    NotLaplacian(String),
}

/// An undirected edge with 0-based endpoints, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A simple, loop-free graph with positive edge weights and on-site potentials.
///
/// Edges keep the order they were given in; that order is the edge index used
/// by the line-graph construction and by edge lengths of metric graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    potentials: Vec<f64>,
    adjacency: Vec<Vec<(usize, usize)>>,
    components: usize,
}

impl WeightedGraph {
    /// Validates and builds a graph. Vertex ids are 0-based. Missing
    /// potentials default to zero.
    pub fn new<I>(vertex_count: usize, edges: I, potentials: Option<Vec<f64>>) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (idx, (u, v, w)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(GraphError::BadVertexId {
                        edge: idx,
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge { edge: idx, vertex: u });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(GraphError::NonPositiveWeight { edge: idx, weight: w });
            }
            let (u, v) = (u.min(v), u.max(v));
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { edge: idx, u, v });
            }
            adjacency[u].push((v, idx));
            adjacency[v].push((u, idx));
            list.push(Edge { u, v, weight: w });
        }
        let potentials = match potentials {
            None => vec![0.0; vertex_count],
            Some(p) if p.len() != vertex_count => {
                return Err(GraphError::PotentialCount {
                    expected: vertex_count,
                    got: p.len(),
                })
            }
            Some(p) => {
                if let Some(vertex) = p.iter().position(|x| !x.is_finite()) {
                    return Err(GraphError::NonFinitePotential { vertex });
                }
                p
            }
        };
        let mut g = Self {
            vertex_count,
            edges: list,
            potentials,
            adjacency,
            components: 0,
        };
        g.components = g.connected_components().len();
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Number of independent cycles, `l = E - V + C`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components - self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn potentials(&self) -> &[f64] {
        &self.potentials
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, e)| self.edges[e].weight).sum()
    }

    /// Neighbours of `v` together with the index of the connecting edge.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adjacency
            .get(u)?
            .iter()
            .find(|&&(x, _)| x == v)
            .map(|&(_, e)| self.edges[e].weight)
    }

    /// Same topology, new potentials.
    pub fn with_potentials(&self, potentials: Vec<f64>) -> Result<Self, GraphError> {
        Self::new(
            self.vertex_count,
            self.edges.iter().map(|e| (e.u, e.v, e.weight)),
            Some(potentials),
        )
    }

    /// Vertex sets of the connected components, each sorted, ordered by their
    /// smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Symmetric matrix with non-positive off-diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedLaplacian(Matrix);

impl GeneralizedLaplacian {
    /// Accepts a matrix that is exactly symmetric and whose off-diagonal
    /// entries are all `<= 0`.
    pub fn from_matrix(m: Matrix) -> Result<Self, GraphError> {
        if !m.is_square() || m.rows() == 0 {
            return Err(GraphError::NotLaplacian("matrix must be square and non-empty".into()));
        }
        if !m.is_symmetric() {
            return Err(GraphError::NotLaplacian("matrix is not symmetric".into()));
        }
        for i in 0..m.rows() {
            if !m[(i, i)].is_finite() {
                return Err(GraphError::NotLaplacian(format!("diagonal entry {i} is not finite")));
            }
            for j in 0..i {
                let x = m[(i, j)];
                if !(x <= 0.0 && x.is_finite()) {
                    return Err(GraphError::NotLaplacian(format!(
                        "off-diagonal entry ({i}, {j}) = {x} is not a non-positive real"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

impl AsRef<Matrix> for GeneralizedLaplacian {
    fn as_ref(&self) -> &Matrix {
        &self.0
    }
}

/// `L_ij = -w_ij` on edges, `L_ii = P_i`.
pub fn laplacian(g: &WeightedGraph) -> GeneralizedLaplacian {
    let n = g.vertex_count();
    let mut m = Matrix::from_diagonal(g.potentials());
    for e in g.edges() {
        m[(e.u, e.v)] = -e.weight;
        m[(e.v, e.u)] = -e.weight;
    }
    debug_assert_eq!(m.rows(), n);
    GeneralizedLaplacian(m)
}

/// `D - W`: off-diagonal `-w_ij`, diagonal the weighted degree, so every row
/// sums to zero. Potentials on `g` are ignored.
pub fn combinatorial_laplacian(g: &WeightedGraph) -> GeneralizedLaplacian {
    let mut m = laplacian(g).into_matrix();
    for v in 0..g.vertex_count() {
        m[(v, v)] = g.weighted_degree(v);
    }
    GeneralizedLaplacian(m)
}

/// Three distinct positive weights used both as parent edge labels and as line
/// graph weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Labels {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Labels {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GraphError> {
        let ok = [a, b, c].iter().all(|x| *x > 0.0 && x.is_finite()) && a != b && b != c && a != c;
        if ok {
            Ok(Self { a, b, c })
        } else {
            Err(GraphError::BadLabels([a, b, c]))
        }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    fn index_of(&self, w: f64) -> Option<usize> {
        self.as_array().iter().position(|&x| x == w)
    }
}

/// Line graph with the complementary weight rule.
///
/// Parent edge weights are the labels and must each be one of `labels`. Line
/// vertex `i` is parent edge `i`. Two line vertices are joined when the parent
/// edges share a vertex, and the joining edge carries the third label.
pub fn line_graph(parent: &WeightedGraph, labels: Labels) -> Result<WeightedGraph, GraphError> {
    let distinct: BTreeSet<u64> = parent.edges().iter().map(|e| e.weight.to_bits()).collect();
    if distinct.len() > 3 {
        return Err(GraphError::TooManyLabels(distinct.len()));
    }
    let mut label_of = Vec::with_capacity(parent.edge_count());
    for (idx, e) in parent.edges().iter().enumerate() {
        match labels.index_of(e.weight) {
            Some(l) => label_of.push(l),
            None => {
                return Err(GraphError::UnknownLabel {
                    edge: idx,
                    weight: e.weight,
                })
            }
        }
    }
    let all = labels.as_array();
    let mut line_edges = Vec::new();
    for v in 0..parent.vertex_count() {
        let incident: Vec<usize> = parent.neighbors(v).iter().map(|&(_, e)| e).collect();
        for (i, &e1) in incident.iter().enumerate() {
            for &e2 in &incident[i + 1..] {
                let (l1, l2) = (label_of[e1], label_of[e2]);
                if l1 == l2 {
                    return Err(GraphError::NotThreeColored {
                        first: e1.min(e2),
                        second: e1.max(e2),
                        vertex: v,
                    });
                }
                line_edges.push((e1, e2, all[3 - l1 - l2]));
            }
        }
    }
    WeightedGraph::new(parent.edge_count().max(1), line_edges, None)
}

/// Which member of the `7_1` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    First,
    Second,
}

impl Variant {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Variant::First),
            2 => Some(Variant::Second),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Variant::First => 1,
            Variant::Second => 2,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Degree-one vertices of the `7_1` graphs (0-based).
pub const SEVEN_ONE_BOUNDARY: [usize; 3] = [0, 1, 2];
/// The interior triangle of the `7_1` graphs (0-based).
pub const SEVEN_ONE_INTERIOR: [usize; 3] = [3, 4, 5];

/// Transplantation matrix with `T^{-1} L_1 T = L_2`.
pub const SEVEN_ONE_TRANSPLANTATION: [[i8; 6]; 6] = [
    [0, -1, 0, 0, 0, 1],
    [-1, 0, 0, 0, 1, 0],
    [0, 0, -1, 1, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 0, 1],
    [1, 0, 0, 0, 1, 0],
];

/// The isospectral `7_1` pair for weights `(a, b, c)`.
#[derive(Debug, Clone)]
pub struct SevenOnePair {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub first: WeightedGraph,
    pub second: WeightedGraph,
}

impl SevenOnePair {
    pub fn graph(&self, variant: Variant) -> &WeightedGraph {
        match variant {
            Variant::First => &self.first,
            Variant::Second => &self.second,
        }
    }

    pub fn transplantation(&self) -> Matrix {
        seven_one_transplantation()
    }

    pub fn boundary(&self) -> [usize; 3] {
        SEVEN_ONE_BOUNDARY
    }

    pub fn interior(&self) -> [usize; 3] {
        SEVEN_ONE_INTERIOR
    }
}

pub fn seven_one_transplantation() -> Matrix {
    let rows: Vec<Vec<f64>> = SEVEN_ONE_TRANSPLANTATION
        .iter()
        .map(|r| r.iter().map(|&x| f64::from(x)).collect())
        .collect();
    Matrix::from_rows(&rows)
}

/// Edge list of one `7_1` graph, 0-based, in the fixed order
/// (1,4), (2,5), (3,6), (4,5), (4,6), (5,6) of the 1-based labelling.
pub fn seven_one_edges(a: f64, b: f64, c: f64, variant: Variant) -> [(usize, usize, f64); 6] {
    let (b, c) = match variant {
        Variant::First => (b, c),
        Variant::Second => (c, b),
    };
    [(0, 3, c), (1, 4, a), (2, 5, b), (3, 4, c), (3, 5, b), (4, 5, a)]
}

pub fn builtin_7_1_graph(a: f64, b: f64, c: f64, variant: Variant) -> Result<WeightedGraph, GraphError> {
    WeightedGraph::new(6, seven_one_edges(a, b, c, variant), None)
}

pub fn builtin_7_1(a: f64, b: f64, c: f64) -> Result<SevenOnePair, GraphError> {
    Ok(SevenOnePair {
        a,
        b,
        c,
        first: builtin_7_1_graph(a, b, c, Variant::First)?,
        second: builtin_7_1_graph(a, b, c, Variant::Second)?,
    })
}

/// Result of evaluating a polynomial at a Laplacian.
#[derive(Debug, Clone)]
pub struct PolynomialImage {
    pub matrix: Matrix,
    /// Every off-diagonal entry is either zero or strictly negative.
    pub valid: bool,
    /// The graph `matrix` is the generalized Laplacian of, when `valid`.
    pub graph: Option<WeightedGraph>,
}

/// Off-diagonal entries below this fraction of the largest entry count as zero.
pub const POLY_ZERO_TOL: f64 = 1e-12;

/// Evaluates `P(L) = sum_k coeffs[k] L^k` by Horner's rule.
pub fn polynomial_apply(l: &GeneralizedLaplacian, coeffs: &[f64]) -> PolynomialImage {
    let n = l.dim();
    let mut acc = Matrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = acc.matmul(l.matrix()).add(&Matrix::identity(n).scale(c));
    }
    // R L is symmetric in exact arithmetic but not after rounding
    acc = acc.add(&acc.transpose()).scale(0.5);
    let zero = POLY_ZERO_TOL * acc.max_abs().max(1.0);
    let mut edges = Vec::new();
    let mut valid = acc.is_symmetric() && (0..n).all(|i| acc[(i, i)].is_finite());
    for i in 0..n {
        for j in i + 1..n {
            let x = acc[(i, j)];
            if x.abs() <= zero {
                continue;
            }
            if x < 0.0 && x.is_finite() {
                edges.push((i, j, -x));
            } else {
                valid = false;
            }
        }
    }
    let graph = if valid {
        let diag = (0..n).map(|i| acc[(i, i)]).collect();
        WeightedGraph::new(n, edges, Some(diag)).ok()
    } else {
        None
    };
    PolynomialImage {
        valid: graph.is_some(),
        matrix: acc,
        graph,
    }
}

/// Edges grouped by unordered endpoints; handy for comparing graphs built in
/// different edge orders.
pub fn edge_map(g: &WeightedGraph) -> BTreeMap<(usize, usize), f64> {
    g.edges().iter().map(|e| ((e.u, e.v), e.weight)).collect()
}

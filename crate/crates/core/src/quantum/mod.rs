//! Neumann quantum graphs.
//!
//! On an edge `(i, j)` of length `L` an eigenfunction with wave number `k` is
//! fixed by its vertex values,
//!
//! ```text
//! psi(x) = [phi(i) sin(k (L - x)) + phi(j) sin(k x)] / sin(k L),
//! ```
//!
//! and the Neumann condition (outgoing derivatives sum to zero) at every
//! vertex turns into the linear system `M(k) phi = 0` with
//!
//! ```text
//! M_vv = sum_{e at v} cot(k L_e),    M_vw = -1 / sin(k L_vw).
//! ```
//!
//! `det M` has poles wherever some `sin(k L_e)` vanishes; the regularized
//! secular function `det M(k) * prod_e sin(k L_e)` does not, and its sign
//! changes are the spectrum (apart from eigenfunctions vanishing on every
//! vertex, which the ansatz cannot see and which are reported separately).

mod metric;
mod reduced;
mod scan;

use thiserror::Error;

use crate::graph::GraphError;
use crate::spectra::SpectraError;

pub use metric::{edge_eval, MetricGraph};
pub use reduced::{reduced_secular_7_1, ReducedSevenOne};
pub use scan::{find_roots, ScanConfig, SecularScan};

/// `|sin(k L)|` (or `|cos|` for boundary reconstruction) below this is a pole.
pub const POLE_TOL: f64 = 1e-8;
pub const ROOT_TOL: f64 = 1e-10;
/// A local minimum of `|h|` below `DIP_TOL` times the local scale of `h` is
/// reported as a possible double root.
pub const DIP_TOL: f64 = 1e-6;
pub const DEFAULT_GRID_STEP: f64 = 1e-3;
pub const DEFAULT_K_MAX: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("k = {k} is at a pole of edges {edges:?}")]
    AtPole { k: f64, edges: Vec<usize> },
    #[error("sin(k L) vanishes for k = {k}, L = {length}; the edge ansatz is undefined")]
    EdgePole { k: f64, length: f64 },
    #[error("x = {x} lies outside the edge [0, {length}]")]
    OutsideEdge { x: f64, length: f64 },
    #[error("bad scan range: k in ({k_min}, {k_max}) with step {step}")]
    BadRange { k_min: f64, k_max: f64, step: f64 },
    #[error("expected {expected} edge lengths, got {got}")]
    LengthCount { expected: usize, got: usize },
    #[error("edge {edge} has length {length}; lengths must be finite and strictly positive")]
    BadLength { edge: usize, length: f64 },
    #[error("vertex vector has the wrong length or is identically zero")]
    BadVector,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// A real function of the wave number whose sign changes are eigenvalues.
pub trait SecularFunction {
    /// Regularized secular function; finite for every `k > 0`.
    fn value(&self, k: f64) -> f64;

    /// Edge lengths whose `sin(k L) = 0` points need flagging.
    fn lengths(&self) -> Vec<f64>;
}

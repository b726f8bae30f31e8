//! Isospectral weighted graphs and their nodal counts.
//!
//! The crate is organised around five pieces:
//!
//! - [`graph`]: weighted graphs, generalized Laplacians, the line-graph
//!   construction with complementary weights, the built-in `7_1` pair and
//!   polynomial maps of Laplacians.
//! - [`spectra`]: a deterministic cyclic Jacobi eigensolver, characteristic
//!   polynomials, isospectrality and transplantation checks.
//! - [`nodal`]: nodal domain counting, the `n - l <= nu_n <= n` bounds and the
//!   eigenvalue rule that fixes the nodal counts of the `7_1` pair.
//! - [`quantum`]: Neumann metric graphs, vertex and reduced secular matrices,
//!   a pole-free secular function and a bracketing root scan.
//! - [`io`]: the JSON graph file format and small list parsers.

pub mod graph;
pub mod io;
pub mod linalg;
pub mod nodal;
pub mod quantum;
pub mod spectra;

pub use graph::{GeneralizedLaplacian, GraphError, WeightedGraph};
pub use linalg::Matrix;
pub use spectra::SpectralDecomposition;

//! The 3x3 secular matrix of the `7_1` pair after eliminating the boundary
//! vertices.
//!
//! Neumann at a degree-one vertex `i` joined to interior vertex `j` by an edge
//! of length `L` forces `phi(i) = phi(j) / cos(k L)`. Substituting this into
//! the interior conditions gives, for the first graph,
//!
//! ```text
//!        | 2cot(2kc) + cot(kb)   -1/sin(kc)            -1/sin(kb)          |
//! A(k) = | -1/sin(kc)            2cot(2ka) + cot(kc)   -1/sin(ka)          |
//!        | -1/sin(kb)            -1/sin(ka)            2cot(2kb) + cot(ka) |
//! ```
//!
//! and the second graph swaps `b` and `c`.

use super::metric::smallest_eigenvector;
use super::{MetricGraph, QuantumError, SecularFunction, POLE_TOL};
use crate::graph::{seven_one_edges, Variant, SEVEN_ONE_BOUNDARY, SEVEN_ONE_INTERIOR};
use crate::linalg::Matrix;

/// Below this `|sin(ka) sin(kb) sin(kc)|` the row-scaled determinant loses too
/// many digits to the final division and the scattering form takes over.
const ROW_SCALED_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct ReducedSevenOne {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub variant: Variant,
    metric: MetricGraph,
}

impl ReducedSevenOne {
    pub fn new(a: f64, b: f64, c: f64, variant: Variant) -> Result<Self, QuantumError> {
        Ok(Self {
            a,
            b,
            c,
            variant,
            metric: MetricGraph::seven_one(a, b, c, variant)?,
        })
    }

    /// Lengths in the order the first graph uses them: `(a, b, c)` for the
    /// first variant, `(a, c, b)` for the second.
    fn abc(&self) -> (f64, f64, f64) {
        match self.variant {
            Variant::First => (self.a, self.b, self.c),
            Variant::Second => (self.a, self.c, self.b),
        }
    }

    pub fn metric_graph(&self) -> &MetricGraph {
        &self.metric
    }

    pub fn matrix(&self, k: f64) -> Result<Matrix, QuantumError> {
        let (a, b, c) = self.abc();
        let poles: Vec<usize> = [a, b, c]
            .iter()
            .enumerate()
            .filter(|(_, &x)| (2.0 * k * x).sin().abs() < POLE_TOL)
            .map(|(i, _)| i)
            .collect();
        if !poles.is_empty() {
            return Err(QuantumError::AtPole { k, edges: poles });
        }
        let cot = |x: f64| 1.0 / (k * x).tan();
        let csc = |x: f64| 1.0 / (k * x).sin();
        let cot2 = |x: f64| 1.0 / (2.0 * k * x).tan();
        Ok(Matrix::from_rows(&[
            [2.0 * cot2(c) + cot(b), -csc(c), -csc(b)],
            [-csc(c), 2.0 * cot2(a) + cot(c), -csc(a)],
            [-csc(b), -csc(a), 2.0 * cot2(b) + cot(a)],
        ]))
    }

    /// `det A(k)` with row `i` multiplied by the sines clearing its poles,
    /// divided by the surplus factor `sin(ka) sin(kb) sin(kc)`.
    fn row_scaled(&self, k: f64) -> (f64, f64) {
        let (a, b, c) = self.abc();
        let (sa, ca) = (k * a).sin_cos();
        let (sb, cb) = (k * b).sin_cos();
        let (sc, cc) = (k * c).sin_cos();
        let (s2a, c2a) = (2.0 * k * a).sin_cos();
        let (s2b, c2b) = (2.0 * k * b).sin_cos();
        let (s2c, c2c) = (2.0 * k * c).sin_cos();
        let scaled = Matrix::from_rows(&[
            [2.0 * c2c * sb + cb * s2c, -2.0 * cc * sb, -s2c],
            [-s2a, 2.0 * c2a * sc + cc * s2a, -2.0 * ca * sc],
            [-2.0 * cb * sa, -s2b, 2.0 * c2b * sa + ca * s2b],
        ]);
        (scaled.det(), sa * sb * sc)
    }

    /// `det A(k)` directly; poles are errors.
    pub fn determinant(&self, k: f64) -> Result<f64, QuantumError> {
        Ok(self.matrix(k)?.det())
    }

    /// Vertex values of an eigenfunction at a root `k`: the interior part is
    /// the null direction of `A(k)`, the boundary part follows from
    /// `phi(boundary) = phi(interior) / cos(k L)`.
    pub fn reconstruct(&self, k: f64) -> Result<Vec<f64>, QuantumError> {
        let interior = smallest_eigenvector(&self.matrix(k)?)?;
        let edges = seven_one_edges(self.a, self.b, self.c, self.variant);
        let mut phi = vec![0.0; 6];
        for (slot, &v) in SEVEN_ONE_INTERIOR.iter().enumerate() {
            phi[v] = interior[slot];
        }
        for (&bv, &(u, w, len)) in SEVEN_ONE_BOUNDARY.iter().zip(&edges) {
            debug_assert_eq!(u, bv);
            let cos = (k * len).cos();
            if cos.abs() < POLE_TOL {
                return Err(QuantumError::AtPole { k, edges: vec![bv] });
            }
            phi[bv] = phi[w] / cos;
        }
        Ok(phi)
    }

    /// Neumann residual of the reconstructed eigenfunction on the full graph.
    pub fn vertex_residual(&self, k: f64) -> Result<f64, QuantumError> {
        let phi = self.reconstruct(k)?;
        self.metric.vertex_residual(k, &phi)
    }
}

impl SecularFunction for ReducedSevenOne {
    /// `det A(k) * sin(2ka) sin(2kb) sin(2kc)`.
    fn value(&self, k: f64) -> f64 {
        let (det, surplus) = self.row_scaled(k);
        if surplus.abs() >= ROW_SCALED_FLOOR {
            det / surplus
        } else {
            // A is the boundary Schur complement of M, which makes this
            // function 8 times the full-graph one.
            8.0 * self.metric.secular_scattering_form(k)
        }
    }

    fn lengths(&self) -> Vec<f64> {
        vec![self.a, self.b, self.c]
    }
}

/// The reduced matrix for weights `(a, b, c)` and the given variant.
pub fn reduced_secular_7_1(a: f64, b: f64, c: f64, k: f64, variant: Variant) -> Result<Matrix, QuantumError> {
    ReducedSevenOne::new(a, b, c, variant)?.matrix(k)
}

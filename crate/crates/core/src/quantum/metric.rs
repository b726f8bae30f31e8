use num_complex::Complex64;

use super::{QuantumError, SecularFunction, POLE_TOL};
use crate::graph::{builtin_7_1_graph, Variant, WeightedGraph};
use crate::linalg::{complex_det, Matrix};
use crate::spectra::eig_sym;

/// A graph whose edges carry positive lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    graph: WeightedGraph,
    lengths: Vec<f64>,
}

impl MetricGraph {
    /// Uses the edge weights as lengths.
    pub fn from_weighted(graph: &WeightedGraph) -> Self {
        let lengths = graph.edges().iter().map(|e| e.weight).collect();
        Self {
            graph: graph.clone(),
            lengths,
        }
    }

    pub fn with_lengths(graph: &WeightedGraph, lengths: Vec<f64>) -> Result<Self, QuantumError> {
        if lengths.len() != graph.edge_count() {
            return Err(QuantumError::LengthCount {
                expected: graph.edge_count(),
                got: lengths.len(),
            });
        }
        if let Some(edge) = lengths.iter().position(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(QuantumError::BadLength {
                edge,
                length: lengths[edge],
            });
        }
        Ok(Self {
            graph: graph.clone(),
            lengths,
        })
    }

    /// One member of the `7_1` pair with edge lengths `a, b, c`.
    pub fn seven_one(a: f64, b: f64, c: f64, variant: Variant) -> Result<Self, QuantumError> {
        Ok(Self::from_weighted(&builtin_7_1_graph(a, b, c, variant)?))
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    fn poles_at(&self, k: f64) -> Vec<usize> {
        self.lengths
            .iter()
            .enumerate()
            .filter(|(_, &l)| (k * l).sin().abs() < POLE_TOL)
            .map(|(e, _)| e)
            .collect()
    }

    /// `M(k)`: `sum cot(k L_e)` on the diagonal, `-1/sin(k L_vw)` between
    /// neighbours.
    pub fn vertex_secular_matrix(&self, k: f64) -> Result<Matrix, QuantumError> {
        let poles = self.poles_at(k);
        if !poles.is_empty() {
            return Err(QuantumError::AtPole { k, edges: poles });
        }
        let n = self.graph.vertex_count();
        let mut m = Matrix::zeros(n, n);
        for (e, &len) in self.graph.edges().iter().zip(&self.lengths) {
            let (s, c) = (k * len).sin_cos();
            let cot = c / s;
            m[(e.u, e.u)] += cot;
            m[(e.v, e.v)] += cot;
            m[(e.u, e.v)] -= 1.0 / s;
            m[(e.v, e.u)] -= 1.0 / s;
        }
        Ok(m)
    }

    /// `det M(k) * prod_e sin(k L_e)` evaluated directly. Only usable away
    /// from poles; [`SecularFunction::value`] is the pole-free evaluation.
    pub fn secular_vertex_form(&self, k: f64) -> Result<f64, QuantumError> {
        let m = self.vertex_secular_matrix(k)?;
        let sines: f64 = self.lengths.iter().map(|l| (k * l).sin()).product();
        Ok(m.det() * sines)
    }

    /// The regularized secular function through the bond scattering matrix.
    ///
    /// With directed bonds `b`, `U = diag(exp(i k L_b))` and the Neumann
    /// vertex scattering `S[out, in] = 2/deg(v) - [out reverses in]`,
    ///
    /// ```text
    /// det M(k) prod_e sin(k L_e)
    ///     = prod_v deg(v) * i^(E - V) / 2^E * exp(-i k total_length) * det(I - S U)
    /// ```
    ///
    /// where the products and `V` run over non-isolated vertices. The right
    /// side has no poles.
    pub fn secular_scattering_form(&self, k: f64) -> f64 {
        let edges = self.graph.edges();
        let nb = 2 * edges.len();
        if nb == 0 {
            return 1.0;
        }
        // bond 2e runs u -> v, bond 2e + 1 runs v -> u
        let head = |b: usize| {
            let e = &edges[b / 2];
            if b.is_multiple_of(2) {
                e.v
            } else {
                e.u
            }
        };
        let tail = |b: usize| {
            let e = &edges[b / 2];
            if b.is_multiple_of(2) {
                e.u
            } else {
                e.v
            }
        };
        let phase: Vec<Complex64> = (0..nb)
            .map(|b| Complex64::from_polar(1.0, k * self.lengths[b / 2]))
            .collect();
        let mut a = vec![Complex64::new(0.0, 0.0); nb * nb];
        for o in 0..nb {
            a[o * nb + o] += 1.0;
            let v = tail(o);
            let deg = self.graph.degree(v) as f64;
            for &(_, e) in self.graph.neighbors(v) {
                // bond of edge e arriving at v
                let i = if edges[e].v == v { 2 * e } else { 2 * e + 1 };
                debug_assert_eq!(head(i), v);
                let mut s = 2.0 / deg;
                if i == (o ^ 1) {
                    s -= 1.0;
                }
                a[o * nb + i] -= s * phase[i];
            }
        }
        let det = complex_det(nb, a);
        let active: Vec<usize> = (0..self.graph.vertex_count())
            .filter(|&v| self.graph.degree(v) > 0)
            .collect();
        let mut scale: f64 = active.iter().map(|&v| self.graph.degree(v) as f64).product();
        scale /= 2f64.powi(edges.len() as i32);
        let power = (edges.len() as i64 - active.len() as i64).rem_euclid(4);
        let unit = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][power as usize];
        let total = Complex64::from_polar(1.0, -k * self.total_length());
        (det * total * unit * scale).re
    }

    /// Eigenvector of `M(k)` for the eigenvalue of smallest magnitude.
    pub fn null_vector(&self, k: f64) -> Result<Vec<f64>, QuantumError> {
        let m = self.vertex_secular_matrix(k)?;
        smallest_eigenvector(&m)
    }

    /// Largest Neumann defect `|sum of outgoing derivatives|` over vertices of
    /// the function assembled from the vertex values `phi`, divided by
    /// `k * max|phi|`.
    pub fn vertex_residual(&self, k: f64, phi: &[f64]) -> Result<f64, QuantumError> {
        let big = phi.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if phi.len() != self.graph.vertex_count() || big == 0.0 {
            return Err(QuantumError::BadVector);
        }
        let mut flux = vec![0.0; phi.len()];
        for (e, &len) in self.graph.edges().iter().zip(&self.lengths) {
            let (s, c) = (k * len).sin_cos();
            if s.abs() < POLE_TOL {
                return Err(QuantumError::EdgePole { k, length: len });
            }
            // d/dx of the edge function at each end, pointing into the edge
            flux[e.u] += k * (phi[e.v] - phi[e.u] * c) / s;
            flux[e.v] += k * (phi[e.u] - phi[e.v] * c) / s;
        }
        Ok(flux.iter().fold(0.0_f64, |m, x| m.max(x.abs())) / (k * big))
    }
}

impl SecularFunction for MetricGraph {
    fn value(&self, k: f64) -> f64 {
        self.secular_scattering_form(k)
    }

    fn lengths(&self) -> Vec<f64> {
        self.lengths.clone()
    }
}

pub(crate) fn smallest_eigenvector(m: &Matrix) -> Result<Vec<f64>, QuantumError> {
    let d = eig_sym(m)?;
    let best = (0..d.dim())
        .min_by(|&i, &j| d.eigenvalues[i].abs().total_cmp(&d.eigenvalues[j].abs()))
        .ok_or(QuantumError::BadVector)?;
    Ok(d.eigenvectors[best].clone())
}

/// Value at `x` of the edge function with end values `phi_i` (at `x = 0`) and
/// `phi_j` (at `x = length`).
pub fn edge_eval(phi_i: f64, phi_j: f64, length: f64, k: f64, x: f64) -> Result<f64, QuantumError> {
    if !(0.0..=length).contains(&x) {
        return Err(QuantumError::OutsideEdge { x, length });
    }
    let s = (k * length).sin();
    if s.abs() < POLE_TOL {
        return Err(QuantumError::EdgePole { k, length });
    }
    if x == 0.0 {
        return Ok(phi_i);
    }
    if x == length {
        return Ok(phi_j);
    }
    Ok((phi_i * (k * (length - x)).sin() + phi_j * (k * x).sin()) / s)
}

//! Nodal domain counts of graph eigenvectors.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GeneralizedLaplacian, WeightedGraph};
use crate::spectra::{eig_sym, SpectraError, SpectralDecomposition};

pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NodalError {
    #[error("vector has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error(
        "{}vanishes at vertex {vertex}; strong nodal domains are undefined",
        index.map(|i| format!("eigenvector {} ", i + 1)).unwrap_or_else(|| "vector ".into())
    )]
    ZeroEntry { index: Option<usize>, vertex: usize },
    #[error("eigenvalue is zero; the boundary relations divide by it")]
    ZeroEigenvalue,
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Maximal connected subgraphs with one strict sign; zeros are an error.
    Strong,
    /// Maximal connected subgraphs with `phi >= 0` (or `<= 0`) containing at
    /// least one nonzero vertex.
    Weak,
}

/// Per-vertex signs, `0` where `|phi(v)| <= zero_tol * max|phi|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    pub signs: Vec<i8>,
}

impl SignPattern {
    pub fn classify(phi: &[f64], zero_tol: f64) -> Self {
        let big = phi.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let signs = phi
            .iter()
            .map(|&x| {
                if x.abs() <= zero_tol * big {
                    0
                } else if x > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Self { signs }
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.signs.iter().position(|&s| s == 0)
    }
}

/// Number of nodal domains of `phi` on `g`.
pub fn count_nodal_domains(
    g: &WeightedGraph,
    phi: &[f64],
    convention: Convention,
    zero_tol: f64,
) -> Result<usize, NodalError> {
    if phi.len() != g.vertex_count() {
        return Err(NodalError::LengthMismatch {
            expected: g.vertex_count(),
            got: phi.len(),
        });
    }
    let pattern = SignPattern::classify(phi, zero_tol);
    match convention {
        Convention::Strong => {
            if let Some(vertex) = pattern.first_zero() {
                return Err(NodalError::ZeroEntry { index: None, vertex });
            }
            Ok(count_components(g, &pattern.signs, 1) + count_components(g, &pattern.signs, -1))
        }
        Convention::Weak => Ok(count_components(g, &pattern.signs, 1) + count_components(g, &pattern.signs, -1)),
    }
}

/// Components of `{v : sign(v) in {target, 0}}` that contain a vertex of sign
/// `target`. Without zeros this is the strong count for one sign.
fn count_components(g: &WeightedGraph, signs: &[i8], target: i8) -> usize {
    let admitted = |v: usize| signs[v] == target || signs[v] == 0;
    let mut seen = vec![false; signs.len()];
    let mut count = 0;
    for start in 0..signs.len() {
        if seen[start] || signs[start] != target {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in g.neighbors(x) {
                if !seen[y] && admitted(y) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

/// `(n, nu_n, n - l, n)` for an index outside the nodal bounds. `n` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub n: usize,
    pub count: usize,
    pub lower: i64,
    pub upper: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalReport {
    pub eigenvalues: Vec<f64>,
    /// `counts[i]` is the nodal count of the eigenvector with the `(i+1)`-th
    /// smallest eigenvalue.
    pub counts: Vec<usize>,
    pub convention: Convention,
    /// 0-based positions of eigenvalues flagged as degenerate.
    pub degenerate_indices: BTreeSet<usize>,
    pub bound_violations: Vec<BoundViolation>,
}

/// Nodal counts of every eigenvector of `l`, ascending eigenvalue order.
pub fn nodal_sequence(
    g: &WeightedGraph,
    l: &GeneralizedLaplacian,
    convention: Convention,
    zero_tol: f64,
) -> Result<NodalReport, NodalError> {
    let spectrum = eig_sym(l.matrix())?;
    nodal_sequence_from(g, &spectrum, convention, zero_tol)
}

/// As [`nodal_sequence`] for an already computed decomposition.
pub fn nodal_sequence_from(
    g: &WeightedGraph,
    spectrum: &SpectralDecomposition,
    convention: Convention,
    zero_tol: f64,
) -> Result<NodalReport, NodalError> {
    if spectrum.dim() != g.vertex_count() {
        return Err(NodalError::LengthMismatch {
            expected: g.vertex_count(),
            got: spectrum.dim(),
        });
    }
    let mut counts = Vec::with_capacity(spectrum.dim());
    for (index, phi) in spectrum.eigenvectors.iter().enumerate() {
        let nu = count_nodal_domains(g, phi, convention, zero_tol).map_err(|e| match e {
            NodalError::ZeroEntry { vertex, .. } => NodalError::ZeroEntry {
                index: Some(index),
                vertex,
            },
            other => other,
        })?;
        counts.push(nu);
    }
    let mut report = NodalReport {
        eigenvalues: spectrum.eigenvalues.clone(),
        counts,
        convention,
        degenerate_indices: spectrum.degenerate_indices().into_iter().collect(),
        bound_violations: Vec::new(),
    };
    report.bound_violations = check_bounds(&report, g.cycle_rank());
    Ok(report)
}

/// Non-degenerate indices with `nu_n` outside `[n - l, n]`.
pub fn check_bounds(report: &NodalReport, cycle_rank: usize) -> Vec<BoundViolation> {
    report
        .counts
        .iter()
        .enumerate()
        .filter(|(i, _)| !report.degenerate_indices.contains(i))
        .filter_map(|(i, &count)| {
            let n = i + 1;
            let lower = n as i64 - cycle_rank as i64;
            ((count as i64) < lower || count > n).then_some(BoundViolation {
                n,
                count,
                lower,
                upper: n,
            })
        })
        .collect()
}

fn check_rule_input(lambda: f64, a: f64, b: f64, c: f64) -> Result<(), NodalError> {
    if lambda == 0.0 {
        return Err(NodalError::ZeroEigenvalue);
    }
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(NodalError::NonPositiveWeight);
    }
    Ok(())
}

/// Predicted number of nodal domains on the interior triangle of a `7_1`
/// graph for an eigenvector with eigenvalue `lambda`.
///
/// One domain iff `lambda < 0` with `|lambda| > max(a, b, c)`, or
/// `0 < lambda < min(a, b, c)`; two otherwise.
pub fn interior_rule_7_1(lambda: f64, a: f64, b: f64, c: f64) -> Result<usize, NodalError> {
    check_rule_input(lambda, a, b, c)?;
    let max = a.max(b).max(c);
    let min = a.min(b).min(c);
    let one = (lambda < 0.0 && lambda.abs() > max) || (lambda > 0.0 && lambda < min);
    Ok(if one { 1 } else { 2 })
}

/// Predicted total nodal count of a `7_1` eigenvector.
///
/// A boundary vertex satisfies `phi(boundary) = -w / lambda * phi(interior)`,
/// so it shares its neighbour's sign when `lambda < 0` and forms its own
/// domain when `lambda > 0`.
pub fn predicted_total_7_1(lambda: f64, a: f64, b: f64, c: f64) -> Result<usize, NodalError> {
    let interior = interior_rule_7_1(lambda, a, b, c)?;
    Ok(interior + if lambda > 0.0 { 3 } else { 0 })
}

/// Index-by-index comparison of two nodal sequences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsonodalReport {
    pub first: NodalReport,
    pub second: NodalReport,
    /// 1-based indices where the counts differ and neither side is degenerate.
    pub mismatches: Vec<usize>,
    /// 1-based indices flagged degenerate on either side; compared but not
    /// used for the verdict.
    pub degenerate: Vec<usize>,
    /// True iff the counts agree at every non-degenerate index.
    pub verdict: bool,
}

pub fn isonodal(
    g1: &WeightedGraph,
    l1: &GeneralizedLaplacian,
    g2: &WeightedGraph,
    l2: &GeneralizedLaplacian,
    convention: Convention,
    zero_tol: f64,
) -> Result<IsonodalReport, NodalError> {
    if g1.vertex_count() != g2.vertex_count() {
        return Err(NodalError::LengthMismatch {
            expected: g1.vertex_count(),
            got: g2.vertex_count(),
        });
    }
    let first = nodal_sequence(g1, l1, convention, zero_tol)?;
    let second = nodal_sequence(g2, l2, convention, zero_tol)?;
    let degenerate: Vec<usize> = first
        .degenerate_indices
        .union(&second.degenerate_indices)
        .map(|i| i + 1)
        .collect();
    let mismatches: Vec<usize> = (0..first.counts.len())
        .filter(|i| first.counts[*i] != second.counts[*i] && !degenerate.contains(&(i + 1)))
        .map(|i| i + 1)
        .collect();
    Ok(IsonodalReport {
        verdict: mismatches.is_empty(),
        first,
        second,
        mismatches,
        degenerate,
    })
}

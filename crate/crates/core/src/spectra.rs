//! Dense symmetric eigensolver, characteristic polynomials and the
//! isospectrality/transplantation checks built on them.

use serde::Serialize;
use thiserror::Error;
use twofloat::TwoFloat;

use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("matrix is {rows}x{cols}; a square matrix is required")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (largest asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("transplantation matrix is singular")]
    SingularT,
}

pub const MAX_SWEEPS: usize = 50;
/// Off-diagonal Frobenius norm, relative to the full norm, at which the
/// Jacobi iteration stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Entries below this fraction of the largest entry are ignored when fixing
/// the sign of an eigenvector.
pub const SIGN_TOL: f64 = 1e-9;
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
///
/// Each eigenvector has unit norm and its first entry larger than
/// `SIGN_TOL * max|entry|` is positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    /// `degenerate[n]` is set when `lambda_n` is within the degeneracy
    /// tolerance of a neighbouring eigenvalue.
    pub degenerate: Vec<bool>,
    pub sweeps: usize,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Phi diag(lambda) Phi^T`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (lambda, phi) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += lambda * phi[i] * phi[j];
                }
            }
        }
        m
    }

    pub fn degenerate_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degenerate[i]).collect()
    }
}

fn check_symmetric(m: &Matrix) -> Result<(), SpectraError> {
    if !m.is_square() {
        return Err(SpectraError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if !m[(i, j)].is_finite() {
                return Err(SpectraError::NonFinite);
            }
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if worst > 1e-12 * m.max_abs().max(1.0) {
        return Err(SpectraError::NotSymmetric(worst));
    }
    Ok(())
}

/// Cyclic Jacobi eigensolver.
///
/// Rotations are applied row by row over the upper triangle in a fixed
/// order, so identical input gives bit-identical output.
pub fn eig_sym(m: &Matrix) -> Result<SpectralDecomposition, SpectraError> {
    check_symmetric(m)?;
    let n = m.rows();
    let mut a = m.clone();
    // work on the exact symmetric part
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    let mut v = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius();
    let off_norm = |a: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(SpectraError::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s, t);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let eigenvectors: Vec<Vec<f64>> = order.iter().map(|&i| normalize(v.column(i))).collect();
    let degenerate = degeneracy_flags(&eigenvalues);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        degenerate,
        sweeps,
    })
}

/// Applies the rotation annihilating `a[p][q]`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64, t: f64) {
    let n = a.rows();
    let apq = a[(p, q)];
    let tau = s / (1.0 + c);
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_p = arp - s * (arq + tau * arp);
        let new_q = arq + s * (arp - tau * arq);
        a[(r, p)] = new_p;
        a[(p, r)] = new_p;
        a[(r, q)] = new_q;
        a[(q, r)] = new_q;
    }
    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp - s * (vrq + tau * vrp);
        v[(r, q)] = vrq + s * (vrp - tau * vrq);
    }
}

fn normalize(mut phi: Vec<f64>) -> Vec<f64> {
    let norm = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        phi.iter_mut().for_each(|x| *x /= norm);
    }
    let big = phi.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if let Some(first) = phi.iter().find(|x| x.abs() > SIGN_TOL * big) {
        if *first < 0.0 {
            phi.iter_mut().for_each(|x| *x = -*x);
        }
    }
    phi
}

fn degeneracy_flags(sorted: &[f64]) -> Vec<bool> {
    let n = sorted.len();
    let spread = match (sorted.first(), sorted.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0.0,
    };
    let tol = DEGENERACY_TOL * spread.max(1.0);
    (0..n)
        .map(|i| (i > 0 && sorted[i] - sorted[i - 1] < tol) || (i + 1 < n && sorted[i + 1] - sorted[i] < tol))
        .collect()
}

/// Coefficients of `det(x I - M)`, leading coefficient first, computed with
/// the Faddeev-LeVerrier recurrence.
///
/// The recurrence cancels badly when some eigenvalues are much smaller than
/// others, so it runs in double-double arithmetic and rounds once at the end.
/// The result has length `dim + 1` and starts with `1.0`.
pub fn char_poly(m: &Matrix) -> Result<Vec<f64>, SpectraError> {
    if !m.is_square() {
        return Err(SpectraError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let zero = TwoFloat::from(0.0);
    let a: Vec<TwoFloat> = (0..n * n).map(|i| TwoFloat::from(m[(i / n, i % n)])).collect();
    let times_a = |b: &[TwoFloat]| -> Vec<TwoFloat> {
        let mut out = vec![zero; n * n];
        for i in 0..n {
            for l in 0..n {
                let x = a[i * n + l];
                if x == zero {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += x * b[l * n + j];
                }
            }
        }
        out
    };
    let mut coeffs = vec![TwoFloat::from(1.0)];
    let mut mk = vec![zero; n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I,  c_k = -tr(A M_k) / k
        mk = times_a(&mk);
        for i in 0..n {
            mk[i * n + i] += coeffs[k - 1];
        }
        let amk = times_a(&mk);
        let trace = (0..n).fold(zero, |t, i| t + amk[i * n + i]);
        coeffs.push(-trace / k as f64);
    }
    Ok(coeffs.into_iter().map(f64::from).collect())
}

/// Horner evaluation of a polynomial given leading coefficient first.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * x + c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsospectralityReport {
    /// Largest absolute difference of the sorted eigenvalues.
    pub max_eigenvalue_gap: f64,
    /// Largest coefficient difference, each scaled by
    /// `max(1, |c_k^(1)|, |c_k^(2)|)`.
    pub charpoly_coeff_gap: f64,
    pub verdict: bool,
    pub tolerance_used: f64,
}

/// Compares spectra and characteristic polynomials of two symmetric matrices.
pub fn isospectral(m1: &Matrix, m2: &Matrix, tol: f64) -> Result<IsospectralityReport, SpectraError> {
    if m1.rows() != m2.rows() || m1.cols() != m2.cols() {
        return Err(SpectraError::DimensionMismatch {
            left: m1.rows(),
            right: m2.rows(),
        });
    }
    let e1 = eig_sym(m1)?;
    let e2 = eig_sym(m2)?;
    let max_eigenvalue_gap = e1
        .eigenvalues
        .iter()
        .zip(&e2.eigenvalues)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    let p1 = char_poly(m1)?;
    let p2 = char_poly(m2)?;
    let charpoly_coeff_gap = p1.iter().zip(&p2).fold(0.0_f64, |m, (x, y)| {
        m.max((x - y).abs() / 1.0_f64.max(x.abs()).max(y.abs()))
    });
    Ok(IsospectralityReport {
        max_eigenvalue_gap,
        charpoly_coeff_gap,
        verdict: max_eigenvalue_gap <= tol && charpoly_coeff_gap <= tol,
        tolerance_used: tol,
    })
}

/// Pivots below this fraction of `max|T|` mark `T` as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// `max |T^{-1} L_1 T - L_2|`.
pub fn verify_transplantation(l1: &Matrix, l2: &Matrix, t: &Matrix) -> Result<f64, SpectraError> {
    let n = l1.rows();
    for m in [l2, t] {
        if m.rows() != n || !m.is_square() {
            return Err(SpectraError::DimensionMismatch {
                left: n,
                right: m.rows(),
            });
        }
    }
    if !l1.is_square() {
        return Err(SpectraError::NotSquare {
            rows: l1.rows(),
            cols: l1.cols(),
        });
    }
    let lu = t.lu(SINGULAR_TOL).ok_or(SpectraError::SingularT)?;
    let conj = lu.solve(&l1.matmul(t));
    Ok(conj.sub(l2).max_abs())
}

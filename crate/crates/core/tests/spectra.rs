mod common;

use proptest::prelude::*;
use rand::Rng;
use spectral_twins::graph::{builtin_7_1, laplacian, polynomial_apply, seven_one_transplantation};
use spectral_twins::spectra::{char_poly, eig_sym, eval_poly, isospectral, verify_transplantation, SpectraError};
use spectral_twins::{Matrix, WeightedGraph};

/// `det(m)` by the permutation expansion; only for tiny matrices.
fn leibniz_det(m: &Matrix) -> f64 {
    fn permute(m: &Matrix, row: usize, free: &mut Vec<usize>, sign: f64, acc: f64, total: &mut f64) {
        if free.is_empty() {
            *total += sign * acc;
            return;
        }
        for pos in 0..free.len() {
            let col = free.remove(pos);
            // removing at `pos` crosses `pos` smaller remaining columns
            let flip = if pos % 2 == 0 { 1.0 } else { -1.0 };
            permute(m, row + 1, free, sign * flip, acc * m[(row, col)], total);
            free.insert(pos, col);
        }
    }
    let mut total = 0.0;
    permute(m, 0, &mut (0..m.rows()).collect(), 1.0, 1.0, &mut total);
    total
}

fn shifted(m: &Matrix, x: f64) -> Matrix {
    Matrix::identity(m.rows()).scale(x).sub(m)
}

fn random_symmetric(r: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = r.gen_range(-5.0..5.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

#[test]
fn leibniz_oracle_is_sane() {
    let m = Matrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 4.0], [0.0, 4.0, 5.0]]);
    assert!((leibniz_det(&m) - (2.0 * (15.0 - 16.0) - 1.0 * 5.0)).abs() < 1e-12);
}

#[test]
fn char_poly_matches_the_permutation_expansion() {
    for trial in 0..20 {
        let mut r = common::rng(1, trial);
        let n = 1 + trial as usize % 6;
        let m = random_symmetric(&mut r, n);
        let p = char_poly(&m).unwrap();
        assert_eq!(p.len(), n + 1);
        assert_eq!(p[0], 1.0);
        for x in [-3.0, -0.5, 0.0, 1.7, 4.0] {
            let expected = leibniz_det(&shifted(&m, x));
            let got = eval_poly(&p, x);
            assert!(
                (got - expected).abs() <= 1e-9 * expected.abs().max(1.0),
                "n={n} x={x}: {got} vs {expected}"
            );
        }
    }
}

#[test]
fn small_closed_forms() {
    let k2 = laplacian(&WeightedGraph::new(2, [(0, 1, 1.0)], None).unwrap());
    assert_eq!(char_poly(k2.matrix()).unwrap(), vec![1.0, 0.0, -1.0]);
    assert_eq!(char_poly(&Matrix::zeros(3, 3)).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    let s = eig_sym(k2.matrix()).unwrap();
    assert_eq!(s.eigenvalues, vec![-1.0, 1.0]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((s.eigenvectors[0][0] - h).abs() < 1e-15 && (s.eigenvectors[0][1] - h).abs() < 1e-15);
}

#[test]
fn seven_one_pair_is_isospectral_with_identical_char_polys() {
    for trial in 0..50 {
        let mut r = common::rng(2, trial);
        let (a, b, c) = common::weight_triple(&mut r);
        let pair = builtin_7_1(a, b, c).unwrap();
        let (l1, l2) = (laplacian(&pair.first), laplacian(&pair.second));
        let (p1, p2) = (char_poly(l1.matrix()).unwrap(), char_poly(l2.matrix()).unwrap());
        for (x, y) in p1.iter().zip(&p2) {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0));
        }
        let report = isospectral(l1.matrix(), l2.matrix(), 1e-10).unwrap();
        assert!(report.verdict, "{report:?}");
        let s = eig_sym(l1.matrix()).unwrap();
        assert!(s.eigenvalues.iter().sum::<f64>().abs() < 1e-10 * (a + b + c));
    }
}

#[test]
fn isospectral_is_reflexive_symmetric_and_sensitive() {
    let l1 = laplacian(&builtin_7_1(1.0, 2.0, 3.0).unwrap().first);
    let same = isospectral(l1.matrix(), l1.matrix(), 1e-12).unwrap();
    assert!(same.verdict);
    assert_eq!((same.max_eigenvalue_gap, same.charpoly_coeff_gap), (0.0, 0.0));
    let bumped = laplacian(&builtin_7_1(1.1, 2.0, 3.0).unwrap().first);
    let forward = isospectral(l1.matrix(), bumped.matrix(), 1e-10).unwrap();
    let backward = isospectral(bumped.matrix(), l1.matrix(), 1e-10).unwrap();
    assert!(!forward.verdict);
    assert_eq!(forward, backward);
    assert!(matches!(
        isospectral(l1.matrix(), &Matrix::zeros(2, 2), 1e-10),
        Err(SpectraError::DimensionMismatch { .. })
    ));
}

#[test]
fn transplantation_intertwines_the_pair() {
    let t = seven_one_transplantation();
    for trial in 0..100 {
        let mut r = common::rng(3, trial);
        let (a, b, c) = common::weight_triple(&mut r);
        let pair = builtin_7_1(a, b, c).unwrap();
        let (l1, l2) = (laplacian(&pair.first), laplacian(&pair.second));
        assert!(verify_transplantation(l1.matrix(), l2.matrix(), &t).unwrap() <= 1e-10);
        // and every polynomial image along with it
        let q1 = polynomial_apply(&l1, &[0.0, -1.0, 1.0]).matrix;
        let q2 = polynomial_apply(&l2, &[0.0, -1.0, 1.0]).matrix;
        assert!(verify_transplantation(&q1, &q2, &t).unwrap() <= 1e-10 * q1.max_abs().max(1.0));
    }
    let l1 = laplacian(&builtin_7_1(1.0, 2.0, 3.0).unwrap().first);
    assert_eq!(
        verify_transplantation(l1.matrix(), l1.matrix(), &Matrix::identity(6)).unwrap(),
        0.0
    );
    assert!(matches!(
        verify_transplantation(l1.matrix(), l1.matrix(), &Matrix::zeros(6, 6)),
        Err(SpectraError::SingularT)
    ));
}

#[test]
fn repeated_runs_are_bit_identical() {
    let l1 = laplacian(&builtin_7_1(1.0, 2.0, 3.0).unwrap().first);
    let first = eig_sym(l1.matrix()).unwrap();
    for _ in 0..5 {
        assert_eq!(eig_sym(l1.matrix()).unwrap(), first);
    }
}

fn symmetric(max: usize) -> impl Strategy<Value = Matrix> {
    (1usize..=max).prop_flat_map(|n| {
        proptest::collection::vec(-10.0f64..10.0, n * n).prop_map(move |v| {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    m[(i, j)] = v[i * n + j];
                    m[(j, i)] = v[i * n + j];
                }
            }
            m
        })
    })
}

proptest! {
    #[test]
    fn eigendecomposition_invariants(m in symmetric(12)) {
        let n = m.rows();
        let s = eig_sym(&m).unwrap();
        let scale = m.max_abs().max(1.0);
        let rebuilt = s.reconstruct();
        prop_assert!(rebuilt.sub(&m).max_abs() <= 1e-10 * scale);
        for i in 0..n {
            let phi = &s.eigenvectors[i];
            let lphi = m.matvec(phi);
            let res = lphi.iter().zip(phi).map(|(x, p)| (x - s.eigenvalues[i] * p).abs()).fold(0.0, f64::max);
            prop_assert!(res <= 1e-10 * scale);
            for j in 0..n {
                let dot: f64 = phi.iter().zip(&s.eigenvectors[j]).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - want).abs() <= 1e-10);
            }
            let first = phi.iter().find(|x| x.abs() > 1e-9 * phi.iter().fold(0.0_f64, |a, b| a.max(b.abs())));
            prop_assert!(*first.unwrap() > 0.0);
        }
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((s.eigenvalues.iter().sum::<f64>() - m.trace()).abs() <= 1e-10 * scale * n as f64);
    }

    #[test]
    fn char_poly_vanishes_at_eigenvalues(m in symmetric(8)) {
        let s = eig_sym(&m).unwrap();
        let p = char_poly(&m).unwrap();
        let spread = s.eigenvalues.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
        for &lambda in &s.eigenvalues {
            // derivative-free scale: the size of the terms being cancelled
            let terms: f64 = p.iter().enumerate().map(|(i, c)| c.abs() * spread.powi((p.len() - 1 - i) as i32)).sum();
            prop_assert!(eval_poly(&p, lambda).abs() <= 1e-8 * terms);
        }
    }
}

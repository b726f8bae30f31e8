use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{QuantumError, SecularFunction, DEFAULT_GRID_STEP, DEFAULT_K_MAX, DIP_TOL, POLE_TOL, ROOT_TOL};

/// Grid points on either side used to estimate the local size of `h` for the
/// double-root test.
const SCALE_WINDOW: usize = 50;
const MAX_GRID_POINTS: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub grid_step: f64,
    pub root_tol: f64,
    pub pole_tol: f64,
    pub dip_tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            k_min: DEFAULT_GRID_STEP,
            k_max: DEFAULT_K_MAX,
            grid_step: DEFAULT_GRID_STEP,
            root_tol: ROOT_TOL,
            pole_tol: POLE_TOL,
            dip_tol: DIP_TOL,
        }
    }
}

impl ScanConfig {
    pub fn range(k_min: f64, k_max: f64, grid_step: f64) -> Self {
        Self {
            k_min,
            k_max,
            grid_step,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<usize, QuantumError> {
        let bad = QuantumError::BadRange {
            k_min: self.k_min,
            k_max: self.k_max,
            step: self.grid_step,
        };
        let finite = [self.k_min, self.k_max, self.grid_step].iter().all(|x| x.is_finite());
        if !finite || self.k_min <= 0.0 || self.k_max <= self.k_min || self.grid_step <= 0.0 {
            return Err(bad);
        }
        let intervals = ((self.k_max - self.k_min) / self.grid_step).ceil();
        if intervals > MAX_GRID_POINTS {
            return Err(bad);
        }
        Ok(intervals as usize)
    }
}

/// Result of scanning a secular function over `(k_min, k_max)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecularScan {
    pub config: ScanConfig,
    /// Sign changes refined by bisection, ascending, excluding those at
    /// flagged points.
    pub roots: Vec<f64>,
    /// Every `k = n pi / L_e` in range. There the vertex ansatz breaks down, so
    /// eigenvalues whose eigenfunctions vanish on all vertices may sit here.
    pub flagged: Vec<f64>,
    /// Local minima of `|h|` that reach (numerically) zero without a sign
    /// change: double roots, or two roots closer than the grid step.
    pub dips: Vec<f64>,
}

impl SecularScan {
    /// Whether `k` is one of the flagged points.
    pub fn is_flagged(&self, k: f64) -> bool {
        self.flagged.iter().any(|f| (f - k).abs() <= 1e-9 * k.max(1.0))
    }
}

/// `n pi / L` strictly inside `(k_min, k_max)` for every length.
fn pole_candidates(lengths: &[f64], k_min: f64, k_max: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &len in lengths {
        let first = (k_min * len / PI).floor() as u64 + 1;
        let mut n = first;
        loop {
            let k = n as f64 * PI / len;
            if k >= k_max {
                break;
            }
            if k > k_min {
                out.push(k);
            }
            n += 1;
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs());
    out
}

fn near_pole(k: f64, lengths: &[f64], cfg: &ScanConfig) -> bool {
    lengths.iter().any(|&len| {
        let n = (k * len / PI).round();
        (k - n * PI / len).abs() <= cfg.pole_tol / len + cfg.root_tol
    })
}

fn bisect<F: SecularFunction>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f.value(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimisation of `|f|` on `[lo, hi]`.
fn minimise_abs<F: SecularFunction>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f.value(x1).abs();
    let mut f2 = f.value(x2).abs();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f.value(x1).abs();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f.value(x2).abs();
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Brackets sign changes of `f` on a uniform grid and refines them by
/// bisection. Grid values are computed in parallel.
pub fn find_roots<F: SecularFunction + Sync>(f: &F, cfg: &ScanConfig) -> Result<SecularScan, QuantumError> {
    let intervals = cfg.validate()?;
    let ks: Vec<f64> = (0..=intervals)
        .map(|i| (cfg.k_min + i as f64 * cfg.grid_step).min(cfg.k_max))
        .collect();
    let values: Vec<f64> = ks.par_iter().map(|&k| f.value(k)).collect();
    let lengths = f.lengths();

    let mut candidates = Vec::new();
    for i in 0..intervals {
        let (k0, k1) = (ks[i], ks[i + 1]);
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            if i > 0 {
                candidates.push(k0);
            }
            continue;
        }
        if f1 != 0.0 && (f0 > 0.0) != (f1 > 0.0) {
            candidates.push(bisect(f, k0, k1, f0, cfg.root_tol));
        }
    }
    let roots = candidates
        .into_iter()
        .filter(|&k| !near_pole(k, &lengths, cfg))
        .collect();

    let mut dips = Vec::new();
    for i in 1..intervals {
        let (prev, here, next) = (values[i - 1], values[i], values[i + 1]);
        let same_sign = (prev > 0.0 && here > 0.0 && next > 0.0) || (prev < 0.0 && here < 0.0 && next < 0.0);
        if !same_sign || here.abs() >= prev.abs() || here.abs() > next.abs() {
            continue;
        }
        let lo = i.saturating_sub(SCALE_WINDOW);
        let hi = (i + SCALE_WINDOW).min(intervals);
        let scale = values[lo..=hi].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let (k, value) = minimise_abs(f, ks[i - 1], ks[i + 1], cfg.root_tol);
        if value <= cfg.dip_tol * scale {
            dips.push(k);
        }
    }

    Ok(SecularScan {
        config: *cfg,
        roots,
        flagged: pole_candidates(&lengths, cfg.k_min, cfg.k_max),
        dips,
    })
}

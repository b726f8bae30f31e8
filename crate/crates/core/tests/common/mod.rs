#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_twins::WeightedGraph;

pub const DEFAULT_SEED: u64 = 20_071;

/// Seed for randomized suites; `SPECTRAL_TWINS_SEED` overrides the default.
pub fn seed() -> u64 {
    std::env::var("SPECTRAL_TWINS_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Independent generator for trial `trial` of suite `suite`.
pub fn rng(suite: u64, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed() ^ suite.rotate_left(32));
    r.set_stream(trial);
    r
}

/// Uniform draw from `(0, hi]`.
pub fn positive(r: &mut ChaCha8Rng, hi: f64) -> f64 {
    hi * (1.0 - r.gen::<f64>())
}

pub fn weight_triple(r: &mut ChaCha8Rng) -> (f64, f64, f64) {
    (positive(r, 10.0), positive(r, 10.0), positive(r, 10.0))
}

/// Random labelled tree on `n` vertices: vertex `v` hangs off a random
/// earlier vertex.
pub fn random_tree(r: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let edges: Vec<_> = (1..n)
        .map(|v| (r.gen_range(0..v), v, 0.1 + r.gen::<f64>() * 5.0))
        .collect();
    WeightedGraph::new(n, edges, None).unwrap()
}

pub fn random_complete(r: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 0.1 + r.gen::<f64>() * 5.0));
        }
    }
    WeightedGraph::new(n, edges, None).unwrap()
}

pub fn random_cycle(r: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n, 0.1 + r.gen::<f64>() * 5.0)).collect();
    WeightedGraph::new(n, edges, None).unwrap()
}

#![no_main]

use libfuzzer_sys::fuzz_target;
use spectral_twins::graph::{laplacian, polynomial_apply};
use spectral_twins::io::parse_graph_file;
use spectral_twins::nodal::{nodal_sequence, Convention, DEFAULT_ZERO_TOL};
use spectral_twins::quantum::{find_roots, MetricGraph, ScanConfig};
use spectral_twins::spectra::{char_poly, eig_sym};

/// Dense analyses are cubic in the vertex count; keep iterations fast.
const MAX_VERTICES: usize = 12;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(loaded) = parse_graph_file(text) else { return };
    let g = &loaded.graph;
    if g.vertex_count() > MAX_VERTICES {
        return;
    }
    let l = laplacian(g);
    if l.matrix().max_abs() > 1e100 {
        return;
    }
    if let Ok(s) = eig_sym(l.matrix()) {
        assert_eq!(s.eigenvalues.len(), g.vertex_count());
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
    let _ = char_poly(l.matrix());
    if let Ok(report) = nodal_sequence(g, &l, Convention::Weak, DEFAULT_ZERO_TOL) {
        assert!(report.counts.iter().all(|&c| c <= g.vertex_count()));
    }
    let _ = polynomial_apply(&l, &[0.0, 1.0, -0.5]);
    let mg = match loaded.lengths {
        Some(lengths) => MetricGraph::with_lengths(g, lengths),
        None => Ok(MetricGraph::from_weighted(g)),
    };
    if let Ok(mg) = mg {
        if g.edge_count() <= 8 && mg.lengths().iter().all(|&x| (1e-3..1e3).contains(&x)) {
            let _ = find_roots(&mg, &ScanConfig::range(0.01, 3.0, 0.01));
        }
    }
});

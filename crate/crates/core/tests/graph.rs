mod common;

use proptest::prelude::*;
use spectral_twins::graph::{
    builtin_7_1, combinatorial_laplacian, laplacian, line_graph, polynomial_apply, GraphError, Labels, Variant,
};
use spectral_twins::spectra::eig_sym;
use spectral_twins::{Matrix, WeightedGraph};

const LINE_EDGES: [(usize, usize); 6] = [(0, 3), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)];

fn line_adjacent(i: usize, j: usize) -> bool {
    LINE_EDGES.contains(&(i.min(j), i.max(j)))
}

/// Every simple parent on at most `max_vertices` vertices whose edge `i`
/// meets edge `j` exactly when line vertices `i` and `j` are adjacent.
/// Vertices are introduced in increasing order to skip relabellings.
fn parents(max_vertices: usize) -> Vec<Vec<(usize, usize)>> {
    fn extend(edges: &mut Vec<(usize, usize)>, used: usize, max: usize, out: &mut Vec<Vec<(usize, usize)>>) {
        let i = edges.len();
        if i == LINE_EDGES.len() {
            out.push(edges.clone());
            return;
        }
        let limit = (used + 2).min(max);
        for u in 0..limit {
            for v in u + 1..limit {
                // a new vertex may only be the next unused id
                if u > used || (v >= used && v != used.max(u + 1)) {
                    continue;
                }
                if edges.contains(&(u, v)) {
                    continue;
                }
                let consistent = edges.iter().enumerate().all(|(j, &(x, y))| {
                    let meet = x == u || x == v || y == u || y == v;
                    meet == line_adjacent(i, j)
                });
                if !consistent {
                    continue;
                }
                let grown = used.max(v + 1);
                edges.push((u, v));
                extend(edges, grown, max, out);
                edges.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 0, max_vertices, &mut out);
    out
}

#[test]
fn exhaustive_parent_search_recovers_the_seven_one_graph() {
    let (a, b, c) = (1.0, 2.0, 3.0);
    let labels = Labels::new(a, b, c).unwrap();
    let target = laplacian(&builtin_7_1(a, b, c).unwrap().first);
    let mut hits = Vec::new();
    for parent in parents(7) {
        let vertices = parent.iter().map(|&(_, v)| v + 1).max().unwrap();
        for code in 0..3usize.pow(6) {
            let colours: Vec<f64> = (0..6).map(|i| [a, b, c][(code / 3usize.pow(i)) % 3]).collect();
            let g = WeightedGraph::new(
                vertices,
                parent.iter().zip(&colours).map(|(&(u, v), &w)| (u, v, w)),
                None,
            )
            .unwrap();
            let Ok(line) = line_graph(&g, labels) else { continue };
            if laplacian(&line).matrix() == target.matrix() {
                hits.push((parent.clone(), colours));
            }
        }
    }
    assert!(!hits.is_empty(), "no parent found");
    for (parent, colours) in &hits {
        // a spider: three legs of two edges meeting at one centre
        let vertices = parent.iter().map(|&(_, v)| v + 1).max().unwrap();
        assert_eq!(vertices, 7);
        let g = WeightedGraph::new(vertices, parent.iter().map(|&(u, v)| (u, v, 1.0)), None).unwrap();
        let mut degrees: Vec<usize> = (0..vertices).map(|v| g.degree(v)).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(colours, &vec![b, c, a, a, b, c]);
    }
}

#[test]
fn line_graph_of_a_two_edge_path() {
    let labels = Labels::new(1.0, 2.0, 3.0).unwrap();
    let parent = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 2.0)], None).unwrap();
    let line = line_graph(&parent, labels).unwrap();
    assert_eq!(line.vertex_count(), 2);
    assert_eq!(line.edge_count(), 1);
    assert_eq!(line.weight(0, 1), Some(3.0));
}

#[test]
fn line_graph_of_a_star_is_a_complementary_triangle() {
    let labels = Labels::new(1.0, 2.0, 3.0).unwrap();
    let parent = WeightedGraph::new(4, [(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)], None).unwrap();
    let line = line_graph(&parent, labels).unwrap();
    assert_eq!(line.weight(0, 1), Some(3.0));
    assert_eq!(line.weight(0, 2), Some(2.0));
    assert_eq!(line.weight(1, 2), Some(1.0));
}

#[test]
fn line_graph_rejects_bad_colourings() {
    let labels = Labels::new(1.0, 2.0, 3.0).unwrap();
    let same = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)], None).unwrap();
    assert!(matches!(
        line_graph(&same, labels),
        Err(GraphError::NotThreeColored { .. })
    ));
    let four = WeightedGraph::new(5, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (3, 4, 4.0)], None).unwrap();
    assert!(matches!(line_graph(&four, labels), Err(GraphError::TooManyLabels(4))));
    let stray = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 5.0)], None).unwrap();
    assert!(matches!(
        line_graph(&stray, labels),
        Err(GraphError::UnknownLabel { .. })
    ));
}

#[test]
fn construction_errors() {
    assert!(matches!(
        WeightedGraph::new(2, [(1, 1, 1.0)], None),
        Err(GraphError::LoopEdge { .. })
    ));
    assert!(matches!(
        WeightedGraph::new(2, [(0, 1, 0.0)], None),
        Err(GraphError::NonPositiveWeight { .. })
    ));
    assert!(matches!(
        WeightedGraph::new(2, [(0, 1, 1.0), (1, 0, 2.0)], None),
        Err(GraphError::DuplicateEdge { .. })
    ));
    assert!(matches!(
        WeightedGraph::new(2, [(0, 2, 1.0)], None),
        Err(GraphError::BadVertexId { .. })
    ));
    assert!(builtin_7_1(1.0, -2.0, 3.0).is_err());
}

#[test]
fn forest_counts() {
    let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)], None).unwrap();
    assert_eq!((g.component_count(), g.cycle_rank()), (2, 0));
}

#[test]
fn laplacian_of_k2() {
    let g = WeightedGraph::new(2, [(0, 1, 5.0)], None).unwrap();
    assert_eq!(laplacian(&g).matrix(), &Matrix::from_rows(&[[0.0, -5.0], [-5.0, 0.0]]));
}

#[test]
fn printed_seven_one_matrices() {
    let (a, b, c) = (1.25, 2.5, 4.75);
    let pair = builtin_7_1(a, b, c).unwrap();
    let l1 = Matrix::from_rows(&[
        [0.0, 0.0, 0.0, -c, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -a, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, -b],
        [-c, 0.0, 0.0, 0.0, -c, -b],
        [0.0, -a, 0.0, -c, 0.0, -a],
        [0.0, 0.0, -b, -b, -a, 0.0],
    ]);
    let l2 = Matrix::from_rows(&[
        [0.0, 0.0, 0.0, -b, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -a, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, -c],
        [-b, 0.0, 0.0, 0.0, -b, -c],
        [0.0, -a, 0.0, -b, 0.0, -a],
        [0.0, 0.0, -c, -c, -a, 0.0],
    ]);
    assert_eq!(laplacian(&pair.first).matrix(), &l1);
    assert_eq!(laplacian(&pair.second).matrix(), &l2);
    for l in [&l1, &l2] {
        let negative = (0..6)
            .flat_map(|i| (0..6).map(move |j| (i, j)))
            .filter(|&(i, j)| l[(i, j)] < 0.0)
            .count();
        assert_eq!(negative, 12);
    }
    let equal = builtin_7_1(1.0, 1.0, 1.0).unwrap();
    assert_eq!(equal.first, equal.second);
    assert_eq!(pair.graph(Variant::Second), &pair.second);
}

#[test]
fn combinatorial_rows_sum_to_zero() {
    let p3 = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)], None).unwrap();
    let l = combinatorial_laplacian(&p3);
    for i in 0..3 {
        assert_eq!(l.matrix().row(i).iter().sum::<f64>(), 0.0);
        assert_eq!(l.matrix().scale(-1.0).row(i).iter().sum::<f64>(), 0.0);
    }
    let star = WeightedGraph::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], None).unwrap();
    let spectrum = eig_sym(&combinatorial_laplacian(&star).matrix().scale(-1.0)).unwrap();
    assert!(spectrum.eigenvalues.iter().any(|x| x.abs() < 1e-12));
}

#[test]
fn second_order_polynomial_needs_a_negative_coefficient() {
    let (a, b, c) = (1.0, 2.0, 3.0);
    let l1 = laplacian(&builtin_7_1(a, b, c).unwrap().first);
    let positive = polynomial_apply(&l1, &[0.0, 0.0, 1.0]);
    assert!(!positive.valid);
    let image = polynomial_apply(&l1, &[0.0, 0.0, -1.0]);
    assert!(image.valid);
    let g = image.graph.unwrap();
    // boundary vertices couple through their shared interior neighbour
    assert_eq!(g.weight(0, 4), Some(c * c));
    assert_eq!(g.weight(0, 5), Some(c * b));
    assert_eq!(g.weight(3, 4), Some(b * a));
    assert_eq!(g.potentials()[0], -c * c);
}

#[test]
fn cubic_polynomial_gives_a_complete_graph() {
    let l1 = laplacian(&builtin_7_1(1.0, 2.0_f64.sqrt(), std::f64::consts::PI).unwrap().first);
    let image = polynomial_apply(&l1, &[0.0, 0.0, 0.0, 1.0]);
    let g = image.graph.expect("valid");
    assert_eq!(g.edge_count(), 15);
}

fn arbitrary_graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..9)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (
                Just(n),
                Just(pairs),
                proptest::collection::vec(proptest::option::of(0.1f64..10.0), m),
            )
        })
        .prop_map(|(n, pairs, weights)| {
            let edges: Vec<_> = pairs
                .into_iter()
                .zip(weights)
                .filter_map(|((u, v), w)| w.map(|w| (u, v, w)))
                .collect();
            WeightedGraph::new(n, edges, None).unwrap()
        })
}

proptest! {
    #[test]
    fn identity_polynomial_is_the_identity(g in arbitrary_graph()) {
        let l = laplacian(&g);
        let image = polynomial_apply(&l, &[0.0, 1.0]);
        prop_assert_eq!(&image.matrix, l.matrix());
    }

    #[test]
    fn derived_counts_are_consistent(g in arbitrary_graph()) {
        let components = g.connected_components();
        prop_assert_eq!(components.len(), g.component_count());
        prop_assert_eq!(g.cycle_rank() + g.vertex_count(), g.edge_count() + g.component_count());
    }

    #[test]
    fn line_graph_edge_count(n in 3usize..12, seed in 0u64..1000) {
        // a properly 3-edge-coloured path or even cycle
        let labels = Labels::new(1.0, 2.0, 3.0).unwrap();
        let closed = seed % 2 == 0 && n % 2 == 0;
        let m = if closed { n } else { n - 1 };
        let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % n, if i % 2 == 0 { 1.0 } else { 2.0 })).collect();
        let parent = WeightedGraph::new(n, edges, None).unwrap();
        let line = line_graph(&parent, labels).unwrap();
        let expected: usize = (0..n).map(|v| parent.degree(v) * parent.degree(v).saturating_sub(1) / 2).sum();
        prop_assert_eq!(line.vertex_count(), parent.edge_count());
        prop_assert_eq!(line.edge_count(), expected);
    }
}

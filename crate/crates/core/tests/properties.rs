//! Property tests over randomly chosen flop data, walks and points.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use flop_core::arrangement::{
    enumerate_alcoves, enumerate_chambers, ExchangeGraph, FiniteArrangement, LevelArrangement, Window,
};
use flop_core::dynkin::{build_diagram, catalog_datum, DiagramJson, Family, FlopDatum};
use flop_core::linalg::{dot, dot_q, q, IntMatrix, Q};
use flop_core::tracking::{classify_complex_point, crossing_matrix, path_matrix, rank_vector, ComplexPoint};

fn datum(f: Family, n: usize, white: &[usize]) -> FlopDatum {
    FlopDatum::new(build_diagram(f, n).unwrap(), white).unwrap()
}

/// Small flop data whose finite arrangements stay in the low thousands of
/// chambers.
fn small_datum() -> impl Strategy<Value = FlopDatum> {
    let shapes: Vec<(Family, usize, usize)> = vec![
        (Family::A, 1, 1),
        (Family::A, 2, 2),
        (Family::A, 3, 3),
        (Family::A, 4, 3),
        (Family::D, 4, 3),
        (Family::D, 5, 2),
        (Family::E, 6, 2),
        (Family::E, 7, 1),
        (Family::E, 8, 1),
    ];
    proptest::sample::select(shapes).prop_flat_map(|(f, n, max_white)| {
        proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=max_white)
            .prop_map(move |white| datum(f, n, &white))
    })
}

fn a3_finite() -> &'static ExchangeGraph {
    static G: OnceLock<ExchangeGraph> = OnceLock::new();
    G.get_or_init(|| enumerate_chambers(&FiniteArrangement::new(&datum(Family::A, 3, &[1, 2, 3])).unwrap()).unwrap())
}

fn a2_affine() -> &'static ExchangeGraph {
    static G: OnceLock<ExchangeGraph> = OnceLock::new();
    G.get_or_init(|| {
        let fd = datum(Family::A, 2, &[1, 2]);
        enumerate_alcoves(&LevelArrangement::new(&fd, Window::from_k(&fd, 4)).unwrap()).unwrap()
    })
}

fn e6_level() -> &'static ExchangeGraph {
    static G: OnceLock<ExchangeGraph> = OnceLock::new();
    G.get_or_init(|| {
        let fd = catalog_datum(3).unwrap();
        enumerate_alcoves(&LevelArrangement::new(&fd, Window::covering(&fd, q(-2, 1), q(3, 1))).unwrap()).unwrap()
    })
}

/// Follows `choices` as neighbour picks from the base chamber, then returns
/// along a shortest path.
fn closed_walk(g: &ExchangeGraph, choices: &[usize]) -> Vec<usize> {
    let mut word = Vec::new();
    let mut cur = ExchangeGraph::BASE;
    for &c in choices {
        let options: Vec<(usize, usize)> =
            g.chamber(cur).neighbours.iter().enumerate().filter_map(|(l, n)| n.map(|n| (l, n))).collect();
        let (l, n) = options[c % options.len()];
        word.push(l);
        cur = n;
    }
    word.extend(g.shortest_word(cur, ExchangeGraph::BASE).unwrap());
    word
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn finite_chambers_are_consistent(fd in small_datum()) {
        let g = enumerate_chambers(&FiniteArrangement::new(&fd).unwrap()).unwrap();
        let mut signs = BTreeSet::new();
        for c in &g.chambers {
            let p = c.interior_point();
            for (w, s) in g.walls.iter().zip(c.sign_vector.chars()) {
                let v = dot(&w.covector, &p);
                prop_assert!(v != 0);
                prop_assert_eq!(v > 0, s == '+');
            }
            prop_assert!(signs.insert(c.sign_vector.clone()));
            prop_assert_eq!(c.rays.det().abs(), 1);
            for l in 0..g.dim {
                let n = g.neighbour(c.id, l).expect("finite arrangements have no outer facets");
                prop_assert_eq!(g.neighbour(n, l), Some(c.id));
                let m = crossing_matrix(&g, c.id, l).unwrap().matrix;
                prop_assert!(m.mul(&m).is_identity());
                prop_assert_eq!(m.det(), -1);
            }
        }
        // the antipode of the base chamber is reached by a word of length
        // equal to the number of walls
        let far = g.chambers.iter().find(|c| c.sign_vector.chars().all(|s| s == '-')).unwrap();
        prop_assert_eq!(g.distances_from(ExchangeGraph::BASE)[far.id], Some(g.walls.len()));
    }

    #[test]
    fn closed_walks_act_trivially(choices in proptest::collection::vec(0usize..6, 0..30), affine in any::<bool>()) {
        let g = if affine { a2_affine() } else { a3_finite() };
        let word = closed_walk(g, &choices);
        let m = path_matrix(g, ExchangeGraph::BASE, &word).unwrap().matrix;
        prop_assert!(m.is_identity());
    }

    #[test]
    fn path_determinant_has_the_parity_of_the_length(choices in proptest::collection::vec(0usize..6, 0..30)) {
        for g in [a3_finite(), a2_affine(), e6_level()] {
            let mut word = Vec::new();
            let mut cur = ExchangeGraph::BASE;
            for &c in &choices {
                let options: Vec<(usize, usize)> =
                    g.chamber(cur).neighbours.iter().enumerate().filter_map(|(l, n)| n.map(|n| (l, n))).collect();
                let (l, n) = options[c % options.len()];
                word.push(l);
                cur = n;
            }
            let m = path_matrix(g, ExchangeGraph::BASE, &word).unwrap();
            prop_assert_eq!(m.target, cur);
            prop_assert_eq!(m.matrix.det(), if word.len().is_multiple_of(2) { 1 } else { -1 });
            prop_assert_eq!(&m.matrix, &g.chamber(cur).rays);
        }
    }

    #[test]
    fn classification_agrees_with_brute_force(
        x in proptest::collection::vec((-9i128..=9, 1i128..=3), 3),
        y in proptest::collection::vec((-9i128..=9, 1i128..=3), 3),
    ) {
        let g = a3_finite();
        let to_q = |v: &[(i128, i128)]| v.iter().map(|&(a, b)| q(a, b)).collect::<Vec<Q>>();
        let z = ComplexPoint::new(to_q(&x), to_q(&y));
        let on_wall = g.walls.iter().any(|w| dot_q(&w.covector, &z.x).is_zero() && dot_q(&w.covector, &z.y).is_zero());
        prop_assume!(!on_wall);
        let class = classify_complex_point(g, &z).unwrap();
        let members: Vec<usize> = (0..g.len())
            .filter(|&c| {
                let rays = &g.chamber(c).rays;
                let (lx, ly) = (rays.solve_q(&z.x).unwrap(), rays.solve_q(&z.y).unwrap());
                lx.iter().zip(&ly).all(|(a, b)| b.is_positive() || (b.is_zero() && a.is_negative()))
            })
            .collect();
        prop_assert_eq!(members, vec![class.chamber]);
        prop_assert_eq!(g.walk(ExchangeGraph::BASE, &class.path).unwrap(), class.chamber);
    }

    #[test]
    fn alcove_ranks_are_positive(len in 1i64..=6) {
        let fd = catalog_datum(len).unwrap();
        let la = LevelArrangement::new(&fd, Window::covering(&fd, q(-1, 1), q(2, 1))).unwrap();
        let g = enumerate_alcoves(&la).unwrap();
        for c in 0..g.len() {
            prop_assert!(rank_vector(&g, c).iter().all(|r| *r > 0));
        }
    }

    #[test]
    fn larger_windows_contain_smaller_ones(len in 1i64..=6, k in 1i64..=4) {
        let fd = catalog_datum(len).unwrap();
        let key = |g: &ExchangeGraph| -> BTreeSet<Vec<Vec<i64>>> {
            g.chambers.iter().map(|c| { let mut v = c.rays.columns(); v.sort(); v }).collect()
        };
        let small = enumerate_alcoves(&LevelArrangement::new(&fd, Window::from_k(&fd, k)).unwrap()).unwrap();
        let large = enumerate_alcoves(&LevelArrangement::new(&fd, Window::from_k(&fd, k + 2)).unwrap()).unwrap();
        prop_assert!(key(&small).is_subset(&key(&large)));
        prop_assert!(small.len() < large.len());
    }

    #[test]
    fn diagram_json_round_trips(fd in small_datum()) {
        let j: DiagramJson = fd.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: DiagramJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(FlopDatum::from_json(&back).unwrap(), fd);
    }
}

#[test]
fn base_chamber_rays_are_the_identity() {
    for g in [a3_finite(), a2_affine(), e6_level()] {
        assert_eq!(g.chamber(ExchangeGraph::BASE).rays, IntMatrix::identity(g.dim));
    }
}

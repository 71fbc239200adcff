use proptest::prelude::*;

use wbembed::domain::{euclidean, Domain, ShortcutPoint};
use wbembed::embedding::{almgren_xi, w2_sq_vectors, zeta, DirectionFamily, LocalMap};
use wbembed::harness::{parse_barcode_csv, BarcodeDiagram};
use wbembed::transport::{assignment_solve, wb_bruteforce, wb_tuples, CostMatrix, UnorderedTuple};
use wbembed::whitney::{DyadicCube, WhitneyDecomposition};

fn square() -> Domain {
    Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
}

fn interior() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..0.999, 2)
}

fn slot() -> impl Strategy<Value = ShortcutPoint> {
    prop_oneof![
        4 => interior().prop_map(ShortcutPoint::Interior),
        1 => Just(ShortcutPoint::Boundary),
    ]
}

fn tuple(max: usize) -> impl Strategy<Value = Vec<ShortcutPoint>> {
    prop::collection::vec(slot(), 0..=max)
}

fn build(points: Vec<ShortcutPoint>) -> UnorderedTuple {
    UnorderedTuple::new(&square(), points).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shortcut_metric_axioms(a in slot(), b in slot(), c in slot()) {
        let d = square();
        let ab = d.shortcut_distance(&a, &b).unwrap();
        let bc = d.shortcut_distance(&b, &c).unwrap();
        let ac = d.shortcut_distance(&a, &c).unwrap();
        prop_assert_eq!(ab, d.shortcut_distance(&b, &a).unwrap());
        prop_assert_eq!(d.shortcut_distance(&a, &a).unwrap(), 0.0);
        prop_assert!(ac <= ab + bc + 1e-12);
        if let (Some(x), Some(y)) = (a.coords(), b.coords()) {
            prop_assert!(ab <= euclidean(x, y));
            let s = d.dist_to_complement(x).unwrap() + d.dist_to_complement(y).unwrap();
            prop_assert!(ab <= s);
        }
    }

    #[test]
    fn padded_assignment_matches_brute_force(p in tuple(4), q in tuple(4), e in prop_oneof![Just(1.0), Just(2.0), Just(3.0)]) {
        let d = square();
        let (p, q) = (build(p), build(q));
        let fast = wb_tuples(&d, &p, &q, e).unwrap();
        let slow = wb_bruteforce(&d, &p, &q, e).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-9, "{} vs {}", fast, slow);
    }

    #[test]
    fn reordering_and_padding_invariance(mut p in tuple(4), q in tuple(4), k in 0usize..3) {
        let d = square();
        let base = wb_tuples(&d, &build(p.clone()), &build(q.clone()), 2.0).unwrap();
        p.reverse();
        let pr = build(p);
        prop_assert_eq!(wb_tuples(&d, &pr, &build(q.clone()), 2.0).unwrap(), base);
        let padded = wb_tuples(&d, &pr.with_boundary(k), &build(q).with_boundary(k), 2.0).unwrap();
        prop_assert!((padded - base).abs() <= 1e-12);
    }

    #[test]
    fn assignment_beats_every_fixed_permutation(n in 1usize..7, data in prop::collection::vec(0.0f64..10.0, 36), shift in 0usize..7) {
        let c = CostMatrix::from_fn(n, |i, j| data[i * 6 + j]).unwrap();
        let a = assignment_solve(&c);
        let rotated: f64 = (0..n).map(|i| c.get(i, (i + shift) % n)).sum();
        prop_assert!(a.total_cost <= rotated + 1e-12);
    }

    #[test]
    fn xi_is_one_lipschitz(
        t in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 1..6),
        noise in prop::collection::vec(prop::collection::vec(-0.1f64..0.1, 3), 6),
        density in 0usize..3,
    ) {
        let f = DirectionFamily::standard(3, density).unwrap();
        let s: Vec<Vec<f64>> = t.iter().zip(&noise).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        let gap = euclidean(&almgren_xi(&t, &f).unwrap(), &almgren_xi(&s, &f).unwrap());
        let w2 = w2_sq_vectors(&t, &s).unwrap().0.sqrt();
        prop_assert!(gap <= w2 + 1e-12);
    }

    #[test]
    fn localization_is_lipschitz(x in interior(), y in interior()) {
        let w = WhitneyDecomposition::new(square());
        let q = w.cube_containing(&x).unwrap();
        let m = LocalMap::new(&q);
        let gap = euclidean(&m.lambda_point(&x), &m.lambda_point(&y));
        prop_assert!(gap <= 9.0 * 3f64.sqrt() * euclidean(&x, &y));
    }

    #[test]
    fn zeta_ignores_boundary_padding(p in tuple(3), q in tuple(3), k in 0usize..3) {
        let d = square();
        let w = WhitneyDecomposition::new(d);
        let f = DirectionFamily::standard(3, 1).unwrap();
        let (p, q) = (build(p), build(q));
        let base = zeta(&w, &f, &p, 3).unwrap().distance(&zeta(&w, &f, &q, 3).unwrap()).unwrap();
        let padded = zeta(&w, &f, &p.with_boundary(k), 3).unwrap()
            .distance(&zeta(&w, &f, &q.with_boundary(k), 3).unwrap()).unwrap();
        prop_assert_eq!(base, padded);
    }

    #[test]
    fn cube_keys_round_trip(k in -60i32..60, corner in prop::collection::vec(-1000i64..1000, 1..4)) {
        let q = DyadicCube::new(k, corner).unwrap();
        prop_assert_eq!(q.to_string().parse::<DyadicCube>().unwrap(), q);
    }

    #[test]
    fn barcode_text_round_trip(pairs in prop::collection::vec((-5.0f64..5.0, 0.001f64..5.0), 0..8)) {
        let diag = BarcodeDiagram::new(pairs.iter().map(|&(b, l)| (b, b + l)).collect()).unwrap();
        let text: String = diag.pairs().iter().map(|(b, d)| format!("{b:.16e},{d:.16e}\n")).collect();
        prop_assert_eq!(parse_barcode_csv(&text).unwrap(), diag);
    }

    #[test]
    fn domain_json_round_trip(lo in prop::collection::vec(-10.0f64..0.0, 1..4), w in 0.1f64..5.0) {
        let hi: Vec<f64> = lo.iter().map(|v| v + w).collect();
        let d = Domain::open_box(lo, hi).unwrap();
        prop_assert_eq!(Domain::from_json(&d.to_json()).unwrap(), d);
    }
}

use std::f64::consts::{PI, TAU};

use approx::assert_relative_eq;
use menger::error::Error;
use menger::geom::{circumradius, kappa, make_e_phi, Point, PointTriple, Polygon};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn planar_triple() -> impl Strategy<Value = [(f64, f64); 3]> {
    [(coord(), coord()), (coord(), coord()), (coord(), coord())]
}

fn triple(p: &[(f64, f64); 3]) -> PointTriple {
    PointTriple::planar(p[0], p[1], p[2])
}

fn rotate(p: (f64, f64), theta: f64, shift: (f64, f64), flip: bool) -> (f64, f64) {
    let (x, y) = if flip { (p.0, -p.1) } else { p };
    let (s, c) = theta.sin_cos();
    (c * x - s * y + shift.0, s * x + c * y + shift.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn kappa_is_permutation_invariant(p in planar_triple()) {
        let k = kappa(&triple(&p));
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let q = [p[perm[0]], p[perm[1]], p[perm[2]]];
            let kq = kappa(&triple(&q));
            prop_assert!((kq - k).abs() <= 1e-12 * k.abs().max(1e-300), "{k} vs {kq}");
        }
    }

    #[test]
    fn kappa_is_isometry_invariant(
        p in planar_triple(),
        theta in 0.0..TAU,
        shift in (coord(), coord()),
        flip in any::<bool>(),
    ) {
        let k = kappa(&triple(&p));
        let q = p.map(|v| rotate(v, theta, shift, flip));
        let kq = kappa(&triple(&q));
        // isometries perturb near-collinear triples; compare against the scale
        let scale = p.iter().flat_map(|a| p.iter().map(move |b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()))
            .fold(0.0f64, f64::max);
        prop_assume!(scale > 1e-3);
        prop_assert!((kq - k).abs() <= 1e-10 * k.max(1.0 / scale), "{k} vs {kq}");
    }

    #[test]
    fn kappa_scales_exactly_for_powers_of_two(p in planar_triple(), e in -8i32..8) {
        let lambda = 2f64.powi(e);
        let k = kappa(&triple(&p));
        let q = p.map(|(x, y)| (lambda * x, lambda * y));
        prop_assert_eq!(kappa(&triple(&q)), k / lambda);
    }

    #[test]
    fn kappa_is_reciprocal_circumradius(p in planar_triple()) {
        let t = triple(&p);
        let (k, r) = (kappa(&t), circumradius(&t));
        if k == 0.0 {
            prop_assert!(r.is_infinite());
        } else {
            prop_assert!(r.is_finite());
            prop_assert!((k * r - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn reflected_corners_have_equal_curvature(
        phi in 0.05..(PI - 0.05),
        s in proptest::array::uniform3(0.0..1.0f64),
        legs in proptest::array::uniform3(any::<bool>()),
    ) {
        let a = make_e_phi(phi).unwrap();
        let b = make_e_phi(TAU - phi).unwrap();
        let at = |poly: &Polygon, leg: bool, t: f64| {
            // vertex 1 is the corner, vertex 0 the end of the horizontal leg
            let end = &poly.vertices()[if leg { 2 } else { 0 }];
            Point::xy(t * end.coords()[0], t * end.coords()[1])
        };
        let ta = PointTriple::new(at(&a, legs[0], s[0]), at(&a, legs[1], s[1]), at(&a, legs[2], s[2])).unwrap();
        let tb = PointTriple::new(at(&b, legs[0], s[0]), at(&b, legs[1], s[1]), at(&b, legs[2], s[2])).unwrap();
        let (ka, kb) = (kappa(&ta), kappa(&tb));
        prop_assert!((ka - kb).abs() <= 1e-10 * ka.max(1.0), "{ka} vs {kb}");
    }

    #[test]
    fn regular_polygons_validate_and_round_trip(n in 3usize..12, r in 0.1..5.0f64) {
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                (r * t.cos(), r * t.sin())
            })
            .collect();
        let p = Polygon::from_xy(&pts, true).unwrap();
        prop_assert!((p.length() - 2.0 * n as f64 * r * (PI / n as f64).sin()).abs() <= 1e-12 * r * n as f64);
        prop_assert_eq!(p.corner_vertices().len(), n);
        let back = Polygon::from_json_str(&p.to_json_string()).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn unit_circle_triple() {
    let t = PointTriple::planar((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0));
    assert_relative_eq!(kappa(&t), 1.0, max_relative = 1e-15);
}

#[test]
fn kappa_in_three_dimensions_matches_planar() {
    let t = PointTriple::new(
        Point::new(vec![0.0, 0.0, 3.0]).unwrap(),
        Point::new(vec![2.0, 0.0, 3.0]).unwrap(),
        Point::new(vec![0.0, 1.0, 3.0]).unwrap(),
    )
    .unwrap();
    let planar = PointTriple::planar((0.0, 0.0), (2.0, 0.0), (0.0, 1.0));
    assert_relative_eq!(kappa(&t), kappa(&planar), max_relative = 1e-14);
}

#[test]
fn bowtie_reports_crossing_edges() {
    let err = Polygon::from_xy(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)], true).unwrap_err();
    assert!(matches!(err, Error::SelfIntersection { first: 0, second: 2 }), "{err}");
}

#[test]
fn repeated_vertex_is_a_zero_length_edge() {
    let err = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)], true).unwrap_err();
    assert!(matches!(err, Error::ZeroLengthEdge { edge: 1 }), "{err}");
}

#[test]
fn e_phi_has_unit_legs() {
    let e = make_e_phi(1.0).unwrap();
    assert!(!e.is_closed());
    assert_relative_eq!(e.edge_length(0), 1.0, max_relative = 1e-15);
    assert_relative_eq!(e.edge_length(1), 1.0, max_relative = 1e-15);
    assert!(make_e_phi(0.0).is_err());
    assert!(make_e_phi(TAU).is_err());
}

#[test]
fn straight_angle_gives_a_flat_polyline() {
    let e = make_e_phi(PI).unwrap();
    assert!(e.corner_vertices().is_empty());
    let t = PointTriple::new(Point::xy(0.3, 0.0), Point::xy(-0.7, 0.0), e.vertices()[2].clone()).unwrap();
    assert_eq!(kappa(&t), 0.0);
}

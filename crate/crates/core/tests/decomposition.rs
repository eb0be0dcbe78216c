use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use menger::decomposition::{
    assemble_upper_bound, corner_decomposition, default_epsilon, separation_constants, CornerDecomposition,
};
use menger::energy::{energy, EnergyKind};
use menger::error::Error;
use menger::geom::{arc_point, kappa, make_e_phi, Point, PointTriple, Polygon};
use menger::mesh::{QuadratureSpec, TruncationSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square() -> Polygon {
    Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true).unwrap()
}

fn l_hexagon() -> Polygon {
    Polygon::from_xy(
        &[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)],
        true,
    )
    .unwrap()
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Point {
    Point::new(a.iter().zip(b).map(|(u, v)| u + t * (v - u)).collect()).unwrap()
}

fn random_in_corner(dec: &CornerDecomposition, i: usize, rng: &mut ChaCha8Rng) -> Point {
    let leg = &dec.corners[i].legs[rng.random_range(0..2)];
    lerp(&leg[0], &leg[1], rng.random())
}

#[test]
fn square_corner_sets() {
    let dec = corner_decomposition(&square(), 0.1).unwrap();
    assert_eq!(dec.corners.len(), 4);
    for c in &dec.corners {
        assert_relative_eq!(c.angle, FRAC_PI_2, max_relative = 1e-15);
        assert_eq!(c.scale, 0.1);
    }
    let sep = separation_constants(&square(), &dec).unwrap();
    assert_relative_eq!(sep.d1, 0.025, max_relative = 1e-14);
    assert_relative_eq!(sep.d2, 0.2, max_relative = 1e-14);
}

#[test]
fn radius_must_stay_below_a_quarter_of_the_shortest_edge() {
    assert!(matches!(corner_decomposition(&square(), 0.3), Err(Error::InvalidArgument(_))));
    // λ = 1 for the model corner, so λ/4 itself is excluded
    let e = make_e_phi(1.0).unwrap();
    assert!(corner_decomposition(&e, 0.25).is_err());
    let dec = corner_decomposition(&e, 0.2).unwrap();
    assert_eq!(dec.corners.len(), 1);
    assert_eq!(dec.corners[0].vertex, 1);
}

#[test]
fn pieces_partition_the_polygon() {
    for poly in [square(), l_hexagon(), make_e_phi(2.0).unwrap()] {
        let dec = corner_decomposition(&poly, default_epsilon(&poly)).unwrap();
        let corners: f64 = dec.corners.iter().map(|c| 2.0 * c.scale).sum();
        let middles: f64 = dec.middles.iter().map(|m| m.length).sum();
        assert!((corners + middles - poly.length()).abs() <= 1e-12 * poly.length());
    }
}

#[test]
fn kernel_bounds_from_the_separation_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for poly in [square(), l_hexagon()] {
        let dec = corner_decomposition(&poly, default_epsilon(&poly)).unwrap();
        let sep = separation_constants(&poly, &dec).unwrap();
        let len = poly.length();
        for _ in 0..10_000 {
            let m = &dec.middles[rng.random_range(0..dec.middles.len())];
            let y = lerp(&m.start, &m.end, rng.random());
            let a = arc_point(&poly, len * rng.random::<f64>()).unwrap();
            let b = arc_point(&poly, len * rng.random::<f64>()).unwrap();
            let k = kappa(&PointTriple::new(y, a, b).unwrap());
            assert!(k <= 1.0 / sep.d1, "{k} > {}", 1.0 / sep.d1);

            let i = rng.random_range(0..dec.corners.len());
            let j = (i + rng.random_range(1..dec.corners.len())) % dec.corners.len();
            let y = random_in_corner(&dec, i, &mut rng);
            let a = random_in_corner(&dec, j, &mut rng);
            let b = arc_point(&poly, len * rng.random::<f64>()).unwrap();
            let k = kappa(&PointTriple::new(y, a, b).unwrap());
            assert!(k <= 1.0 / sep.d2, "{k} > {}", 1.0 / sep.d2);
        }
    }
}

#[test]
fn bulk_term_regression() {
    let dec = corner_decomposition(&square(), 0.1).unwrap();
    let sep = separation_constants(&square(), &dec).unwrap();
    let b = assemble_upper_bound(&square(), EnergyKind::M, 1.0, &dec, &sep, 1.0).unwrap();
    assert_relative_eq!(b.bulk, 28160.0, max_relative = 1e-12);
    // four right corners: α = ε², c(π/2) = 1
    assert_relative_eq!(b.corners, 4.0 * 0.01, max_relative = 1e-12);
}

#[test]
fn truncated_energies_stay_below_the_bound() {
    let dec = corner_decomposition(&square(), 0.1).unwrap();
    let sep = separation_constants(&square(), &dec).unwrap();
    // any upper estimate of the right-corner energy works; 𝓜₁(E_{π/2}) < 13
    let bound = assemble_upper_bound(&square(), EnergyKind::M, 1.0, &dec, &sep, 13.0).unwrap();
    let spec = QuadratureSpec {
        order: 6,
        ..Default::default()
    };
    for delta in [0.05, 0.01, 0.001] {
        let v = energy(&square(), EnergyKind::M, 1.0, &TruncationSpec::new(delta), &spec).unwrap().value;
        assert!(v <= bound.total, "δ = {delta}: {v} > {}", bound.total);
    }
}

#[test]
fn straight_segment_has_no_corner_terms() {
    let seg = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], false).unwrap();
    let dec = corner_decomposition(&seg, 0.1).unwrap();
    assert!(dec.corners.is_empty());
    let sep = separation_constants(&seg, &dec).unwrap();
    assert!(sep.d1.is_infinite() && sep.d2.is_infinite());
    let b = assemble_upper_bound(&seg, EnergyKind::U, 0.5, &dec, &sep, 1.0).unwrap();
    assert_eq!(b.corners, 0.0);
    assert!(b.total >= 0.0);
}

#[test]
fn bound_needs_p_below_threshold() {
    let dec = corner_decomposition(&square(), 0.1).unwrap();
    let sep = separation_constants(&square(), &dec).unwrap();
    for (kind, p) in [(EnergyKind::M, 3.0), (EnergyKind::I, 2.5), (EnergyKind::U, 1.0)] {
        assert!(matches!(
            assemble_upper_bound(&square(), kind, p, &dec, &sep, 1.0),
            Err(Error::AboveThreshold { .. })
        ));
    }
    let _ = PI;
}

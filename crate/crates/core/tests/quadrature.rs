use std::f64::consts::{E, FRAC_PI_2};

use approx::assert_relative_eq;
use menger::energy::{energy, u_energy_closed_form_right_angle, EnergyKind};
use menger::error::Error;
use menger::gauss::GaussLegendre;
use menger::geom::{make_e_phi, Polygon};
use menger::mesh::{build_graded_mesh, QuadratureSpec, TruncationSpec};
use menger::monte_carlo::mc_energy;
use proptest::prelude::*;

fn square() -> Polygon {
    Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true).unwrap()
}

fn fast() -> QuadratureSpec {
    QuadratureSpec {
        order: 6,
        ..Default::default()
    }
}

#[test]
fn gauss_legendre_is_exact_for_polynomials() {
    let rule = GaussLegendre::new(5);
    // degree 9 = 2n − 1
    let v = rule.integrate(-1.0, 2.0, |x| x.powi(9) - 3.0 * x.powi(4) + 1.0);
    let exact = (2f64.powi(10) - 1.0) / 10.0 - 3.0 * (2f64.powi(5) + 1.0) / 5.0 + 3.0;
    assert_relative_eq!(v, exact, max_relative = 1e-14);
}

#[test]
fn u_energy_at_inverse_e_is_four() {
    let e = make_e_phi(FRAC_PI_2).unwrap();
    let r = energy(&e, EnergyKind::U, 1.0, &TruncationSpec::new(1.0 / E), &QuadratureSpec::default()).unwrap();
    assert_relative_eq!(r.value, 4.0, max_relative = 1e-10);
}

#[test]
fn u_energy_matches_closed_form() {
    let e = make_e_phi(FRAC_PI_2).unwrap();
    for p in [0.5, 1.0, 2.0] {
        for delta in [0.5, 0.1, 0.01] {
            let r = energy(&e, EnergyKind::U, p, &TruncationSpec::new(delta), &QuadratureSpec::default()).unwrap();
            let exact = u_energy_closed_form_right_angle(p, delta).unwrap();
            assert_relative_eq!(r.value, exact, max_relative = 1e-6);
        }
    }
}

#[test]
fn energies_grow_as_the_truncation_shrinks() {
    for kind in [EnergyKind::M, EnergyKind::I, EnergyKind::U] {
        let mut last = 0.0;
        for delta in [0.2, 0.1, 0.05, 0.025] {
            let v = energy(&square(), kind, 1.0, &TruncationSpec::new(delta), &fast()).unwrap().value;
            assert!(v >= last, "{kind}: {v} < {last} at δ = {delta}");
            last = v;
        }
    }
}

#[test]
fn doubling_the_order_shrinks_the_error_estimate() {
    // separated pieces: the square away from its corners
    let t = TruncationSpec::new(0.1);
    for kind in [EnergyKind::M, EnergyKind::U] {
        let err = |order| {
            energy(&square(), kind, 1.0, &t, &QuadratureSpec { order, ..Default::default() })
                .unwrap()
                .error_est
        };
        let (a, b) = (err(4), err(8));
        assert!(b <= 0.5 * a, "{kind}: {a} -> {b}");
    }
}

#[test]
fn quadrature_agrees_with_monte_carlo() {
    let t = TruncationSpec::new(0.05);
    let quad = energy(&square(), EnergyKind::M, 1.0, &t, &QuadratureSpec { order: 8, ..Default::default() }).unwrap();
    let mc = mc_energy(&square(), EnergyKind::M, 1.0, &t, 200_000, 11).unwrap();
    assert!((mc.value - quad.value).abs() <= 3.0 * mc.error_est, "{} vs {} ± {}", quad.value, mc.value, mc.error_est);
}

#[test]
fn monte_carlo_u_agrees_with_closed_form() {
    let e = make_e_phi(FRAC_PI_2).unwrap();
    let mc = mc_energy(&e, EnergyKind::U, 0.5, &TruncationSpec::new(0.1), 20_000, 5).unwrap();
    let exact = u_energy_closed_form_right_angle(0.5, 0.1).unwrap();
    assert!((mc.value - exact).abs() <= 3.0 * mc.error_est);
}

#[test]
fn truncation_too_large_is_rejected() {
    let err = energy(&square(), EnergyKind::U, 1.0, &TruncationSpec::new(0.5), &fast()).unwrap_err();
    assert!(matches!(err, Error::InvalidTruncation { .. }), "{err}");
    let err = build_graded_mesh(&square(), &TruncationSpec::new(-1.0), &fast()).unwrap_err();
    assert!(matches!(err, Error::InvalidTruncation { .. }), "{err}");
}

#[test]
fn straight_polyline_has_zero_energy() {
    let line = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], false).unwrap();
    for kind in [EnergyKind::M, EnergyKind::I, EnergyKind::U] {
        assert_eq!(energy(&line, kind, 1.5, &TruncationSpec::new(0.1), &fast()).unwrap().value, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn scaling_laws_hold_for_powers_of_two(e in -2i32..3, p in 0.3..2.0f64, k in 0usize..3) {
        let kind = [EnergyKind::M, EnergyKind::I, EnergyKind::U][k];
        let lambda = 2f64.powi(e);
        let spec = QuadratureSpec { order: 4, depth: 4, ..Default::default() };
        let a = energy(&square(), kind, p, &TruncationSpec::new(0.1), &spec).unwrap().value;
        let b = energy(&square().scaled(lambda), kind, p, &TruncationSpec::new(0.1 * lambda), &spec).unwrap().value;
        let expected = lambda.powf(kind.arity() as f64 - p) * a;
        prop_assert!(((b - expected) / expected).abs() <= 1e-12, "{b} vs {expected}");
    }

    #[test]
    fn monte_carlo_is_reproducible(seed in any::<u64>()) {
        let t = TruncationSpec::new(0.1);
        let a = mc_energy(&square(), EnergyKind::M, 1.0, &t, 5000, seed).unwrap();
        let b = mc_energy(&square(), EnergyKind::M, 1.0, &t, 5000, seed).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}

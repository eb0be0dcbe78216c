use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use menger::energy::EnergyKind;
use menger::geom::Point;
use menger::inequalities::{
    c_phi, corner_bound_check, energy_comparison_check, pushforward_check, straightening_check,
    straightening_lipschitz, straightening_map, TestIntegrand,
};
use menger::mesh::QuadratureSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn checks_pass_on_a_grid_of_angles() {
    for k in 0..50 {
        let phi = 2.0 * PI * (k as f64 + 0.5) / 50.0;
        let a = corner_bound_check(phi, 2000, 7).unwrap();
        let b = straightening_check(phi, 2000, 7).unwrap();
        assert!(a.pass && b.pass, "φ = {phi}: {} {}", a.max_violation, b.max_violation);
    }
}

#[test]
fn corner_bound_is_sharp_at_the_right_angle() {
    // c(π/2) = 1 and the inequality is an identity there
    assert_eq!(c_phi(FRAC_PI_2).unwrap(), 1.0);
    let r = corner_bound_check(FRAC_PI_2, 5000, 1).unwrap();
    assert!(r.max_violation.abs() <= 1e-12, "{}", r.max_violation);
}

#[test]
fn lipschitz_constants_bound_distance_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for phi in [0.4, PI / 3.0, 2.0 * PI / 3.0, 2.8, 4.0] {
        let (lip, lip_inv) = straightening_lipschitz(phi).unwrap();
        let (c, s) = (phi.cos(), phi.sin());
        let mut worst = (0.0f64, 0.0f64);
        for _ in 0..10_000 {
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            let x = Point::xy(u, 0.0);
            let z = Point::xy(v * c, v * s);
            let (fx, fz) = (straightening_map(phi, &x).unwrap(), straightening_map(phi, &z).unwrap());
            let d = x.distance(&z);
            let df = fx.distance(&fz);
            worst = (worst.0.max(df / d), worst.1.max(d / df));
        }
        assert!(worst.0 <= lip * (1.0 + 1e-12) && worst.1 <= lip_inv * (1.0 + 1e-12));
        // and they are nearly attained
        assert!(worst.0 >= 0.99 * lip && worst.1 >= 0.99 * lip_inv, "{worst:?} vs ({lip}, {lip_inv})");
    }
}

#[test]
fn straightening_map_fixes_the_horizontal_leg() {
    let phi = 1.0;
    let x = Point::xy(0.4, 0.0);
    assert_eq!(straightening_map(phi, &x).unwrap(), x);
    let y = Point::xy(0.5 * phi.cos(), 0.5 * phi.sin());
    let fy = straightening_map(phi, &y).unwrap();
    assert_relative_eq!(fy.coords()[0], 0.0, epsilon = 1e-15);
    assert_relative_eq!(fy.coords()[1], 0.5, max_relative = 1e-15);
    assert!(straightening_map(phi, &Point::xy(0.3, 0.3)).is_err());
}

#[test]
fn pushforward_closed_form_cases() {
    for (c, n, f) in [
        (1.0, 1, TestIntegrand::Constant),
        (2.0, 1, TestIntegrand::Product),
        (2.0, 3, TestIntegrand::Product),
    ] {
        let r = pushforward_check(c, n, 4096, f).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.witness[0], 1.0, max_relative = 1e-13);
        assert_relative_eq!(r.witness[1], 1.0, max_relative = 1e-13);
    }
    assert!(pushforward_check(0.5, 1, 10, TestIntegrand::Constant).is_err());
    assert!(pushforward_check(2.0, 4, 10, TestIntegrand::Constant).is_err());
}

#[test]
fn energy_comparison_at_fixed_truncation() {
    let spec = QuadratureSpec {
        order: 8,
        ..Default::default()
    };
    for phi in [PI / 3.0, 2.0 * PI / 3.0] {
        for kind in [EnergyKind::M, EnergyKind::I, EnergyKind::U] {
            let r = energy_comparison_check(kind, phi, 1.0, 0.1, &spec, 1e-6).unwrap();
            assert!(r.pass, "{kind} φ = {phi}: lhs {} rhs {}", r.witness[0], r.witness[1]);
        }
    }
}

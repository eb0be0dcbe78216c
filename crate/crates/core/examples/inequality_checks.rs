//! Randomized and quadrature checks of the corner comparison inequalities.
use menger::energy::EnergyKind;
use menger::inequalities::{
    c_phi, corner_bound_check, energy_comparison_check, pushforward_check, straightening_check,
    straightening_lipschitz, TestIntegrand,
};
use menger::mesh::QuadratureSpec;

fn main() -> menger::error::Result<()> {
    for phi in [0.3, 1.0471975512, 2.0, 3.0] {
        let a = corner_bound_check(phi, 10_000, 42)?;
        let b = straightening_check(phi, 10_000, 42)?;
        let (lip, lip_inv) = straightening_lipschitz(phi)?;
        println!(
            "phi {phi}: c = {:.4}, Lip = ({lip:.4}, {lip_inv:.4}), corner bound {} ({:.2e}), straightening {} ({:.2e})",
            c_phi(phi)?,
            a.pass,
            a.max_violation,
            b.pass,
            b.max_violation
        );
    }

    for arity in 1..=3 {
        let r = pushforward_check(2.0, arity, 4096, TestIntegrand::Product)?;
        println!("pushforward arity {arity}: lhs {:.15} rhs {:.15}", r.witness[0], r.witness[1]);
    }

    let spec = QuadratureSpec { order: 8, ..Default::default() };
    let r = energy_comparison_check(EnergyKind::U, 1.0, 0.5, 0.1, &spec, 1e-9)?;
    println!("energy comparison U: {} (lhs {:.6}, rhs {:.6})", r.pass, r.witness[0], r.witness[1]);
    Ok(())
}

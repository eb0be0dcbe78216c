//! Monte Carlo estimates cross-checked against quadrature.
use menger::energy::{energy, EnergyKind};
use menger::geom::Polygon;
use menger::mesh::{QuadratureSpec, TruncationSpec};
use menger::monte_carlo::mc_energy;

fn main() -> menger::error::Result<()> {
    let square = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true)?;
    let trunc = TruncationSpec::new(0.05);
    let quad = energy(&square, EnergyKind::M, 1.0, &trunc, &QuadratureSpec { order: 8, ..Default::default() })?;
    println!("quadrature: {:.8}", quad.value);

    for seed in [1, 2, 3] {
        let mc = mc_energy(&square, EnergyKind::M, 1.0, &trunc, 200_000, seed)?;
        let z = (mc.value - quad.value) / mc.error_est;
        println!("seed {seed}: {:.6} ± {:.6} (z = {z:+.2})", mc.value, mc.error_est);
    }

    // identical seeds give bit-identical estimates
    let a = mc_energy(&square, EnergyKind::U, 0.5, &trunc, 10_000, 9)?;
    let b = mc_energy(&square, EnergyKind::U, 0.5, &trunc, 10_000, 9)?;
    println!("reproducible: {}", a.value.to_bits() == b.value.to_bits());
    Ok(())
}

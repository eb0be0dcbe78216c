//! Critical exponents of a few polygons.
use menger::asymptotics::{default_delta0, estimate_critical_p_with, DEFAULT_LEVELS};
use menger::energy::EnergyKind;
use menger::geom::{make_e_phi, Polygon};
use menger::mesh::QuadratureSpec;

fn main() -> menger::error::Result<()> {
    let shapes = [
        ("right corner", make_e_phi(std::f64::consts::FRAC_PI_2)?),
        ("wide corner", make_e_phi(2.5)?),
        (
            "triangle",
            Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.75f64.sqrt())], true)?,
        ),
    ];
    let spec = QuadratureSpec::for_critical_p();
    for (name, poly) in &shapes {
        // the triple energy is the slow one; skip it for the polygon
        let kinds: &[EnergyKind] = if poly.is_closed() {
            &[EnergyKind::I, EnergyKind::U]
        } else {
            &[EnergyKind::M, EnergyKind::I, EnergyKind::U]
        };
        for &kind in kinds {
            let est = estimate_critical_p_with(poly, kind, &spec, default_delta0(poly), DEFAULT_LEVELS)?;
            println!("{name:>12} {kind}: p_c = {:.4} (threshold {})", est.p, kind.threshold());
        }
    }
    Ok(())
}

//! Corner sets, separation constants and the assembled upper bound.
use menger::asymptotics::{classify_divergence, default_delta0, dyadic_series, DivergenceClass};
use menger::decomposition::{assemble_upper_bound, corner_decomposition, default_epsilon, separation_constants};
use menger::energy::EnergyKind;
use menger::geom::{make_e_phi, Polygon};
use menger::mesh::QuadratureSpec;

fn main() -> menger::error::Result<()> {
    let hexagon = Polygon::from_xy(
        &[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)],
        true,
    )?;
    let eps = default_epsilon(&hexagon);
    let dec = corner_decomposition(&hexagon, eps)?;
    let sep = separation_constants(&hexagon, &dec)?;
    println!("epsilon {eps}, {} corners, {} middles", dec.corners.len(), dec.middles.len());
    for c in &dec.corners {
        println!("  vertex {} angle {:.4}", c.vertex, c.angle);
    }
    println!("d1 = {}, d2 = {}", sep.d1, sep.d2);

    let spec = QuadratureSpec { order: 8, ..Default::default() };
    let corner = make_e_phi(std::f64::consts::FRAC_PI_2)?;
    let (kind, p) = (EnergyKind::U, 0.5);
    let series = dyadic_series(&corner, kind, p, default_delta0(&corner), 10, &spec)?;
    let DivergenceClass::Finite(reference) = classify_divergence(&series)?.class else {
        unreachable!("p is below the threshold")
    };
    let bound = assemble_upper_bound(&hexagon, kind, p, &dec, &sep, reference)?;
    println!("reference {reference:.6}, bound {:.4} = {:.4} + {:.4}", bound.total, bound.bulk, bound.corners);
    Ok(())
}

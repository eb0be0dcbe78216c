//! Dyadic truncation series and their classification.
use menger::asymptotics::{classify_divergence, SeriesModel};
use menger::energy::EnergyKind;
use menger::geom::make_e_phi;
use menger::mesh::QuadratureSpec;

fn main() -> menger::error::Result<()> {
    let corner = make_e_phi(std::f64::consts::FRAC_PI_2)?;
    let spec = QuadratureSpec { order: 8, ..Default::default() };
    // one mesh serves every exponent
    let model = SeriesModel::new(&corner, EnergyKind::M, 1.0 / 16.0, 10, &spec)?;
    println!("{} nodes", model.node_count());

    for p in [2.5, 3.0, 3.5] {
        let s = model.series(p)?;
        let c = classify_divergence(&s)?;
        println!("p = {p}: {:?}, slope {:+.4}", c.class, c.fit_slope);
        println!("  log2 ratios {:?}", s.log2_ratios(4));
    }

    let s = model.series(2.0)?;
    let mut csv = Vec::new();
    s.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

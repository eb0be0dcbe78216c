//! Truncated energies by graded panel quadrature.
use menger::energy::{energy, u_energy_closed_form_right_angle, EnergyKind};
use menger::geom::{make_e_phi, Polygon};
use menger::mesh::{build_graded_mesh, QuadratureSpec, TruncationSpec};

fn main() -> menger::error::Result<()> {
    let corner = make_e_phi(std::f64::consts::FRAC_PI_2)?;
    let spec = QuadratureSpec::default();

    let mesh = build_graded_mesh(&corner, &TruncationSpec::new(0.01), &spec)?;
    println!("mesh at delta = 0.01: {} panels", mesh.panels.len());

    for p in [0.5, 1.0, 2.0] {
        for delta in [0.5, 0.1, 0.01] {
            let r = energy(&corner, EnergyKind::U, p, &TruncationSpec::new(delta), &spec)?;
            let exact = u_energy_closed_form_right_angle(p, delta)?;
            println!(
                "U p={p} delta={delta}: {:.12} (exact {:.12}, rel err {:.1e})",
                r.value,
                exact,
                (r.value - exact).abs() / exact
            );
        }
    }

    let square = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true)?;
    for kind in [EnergyKind::M, EnergyKind::I, EnergyKind::U] {
        let r = energy(&square, kind, 1.0, &TruncationSpec::new(0.05), &QuadratureSpec { order: 8, ..spec })?;
        println!(
            "square {kind} p=1 delta=0.05: {:.8} ± {:.1e} ({} nodes)",
            r.value, r.error_est, r.nodes
        );
    }
    Ok(())
}

//! The partially maximized kernels on the right-angle corner, against their
//! closed forms.
use menger::geom::{make_e_phi, Point};
use menger::sup::{kappa_g, kappa_g_corner_closed_form, kappa_i, kappa_i_corner_closed_form};

fn main() -> menger::error::Result<()> {
    let corner = make_e_phi(std::f64::consts::FRAC_PI_2)?;

    // both points on the horizontal leg: the maximizer sits on the other leg
    for (xi, eta) in [(0.1, 0.7), (0.25, 0.5), (0.9, 0.05)] {
        let r = kappa_i(&corner, &Point::xy(xi, 0.0), &Point::xy(eta, 0.0), 1e-12)?;
        println!(
            "kappa_i({xi}, {eta}) = {:.12}  closed form {:.12}  argmax {:?}",
            r.value,
            kappa_i_corner_closed_form(xi, eta)?,
            r.argmax[0].coords()
        );
    }

    for k in 1..=4 {
        let t = 0.5f64.powi(k);
        let r = kappa_g(&corner, &Point::xy(t, 0.0), 1e-12)?;
        println!(
            "kappa_g({t}) = {:.10}  closed form {:.10}  converged {}",
            r.value,
            kappa_g_corner_closed_form(t)?,
            r.converged
        );
    }

    // the corner vertex itself has unbounded global curvature
    let at_corner = kappa_g(&corner, &Point::xy(0.0, 0.0), 1e-12)?;
    println!("kappa_g at the vertex = {}", at_corner.value);
    Ok(())
}

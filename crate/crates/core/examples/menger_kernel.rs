//! Menger curvature of point triples and basic polygon geometry.
use menger::geom::{arc_point, circumradius, kappa, make_e_phi, vertex_angle, Point, PointTriple, Polygon};

fn main() -> menger::error::Result<()> {
    // three points on the unit circle
    let t = PointTriple::planar((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0));
    println!("kappa = {}, radius = {}", kappa(&t), circumradius(&t));

    // collinear triples have zero curvature
    let flat = PointTriple::planar((0.0, 0.0), (1.0, 1.0), (3.0, 3.0));
    println!("collinear kappa = {}", kappa(&flat));

    // the same triple embedded in 3-space
    let t3 = PointTriple::new(
        Point::new(vec![1.0, 0.0, 2.0])?,
        Point::new(vec![0.0, 1.0, 2.0])?,
        Point::new(vec![-1.0, 0.0, 2.0])?,
    )?;
    println!("kappa in R^3 = {}", kappa(&t3));

    let square = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true)?;
    println!(
        "square: length {}, diameter {:.6}, corners {:?}",
        square.length(),
        square.diameter(),
        square.corner_vertices()
    );
    println!("point at arc length 2.5: {:?}", arc_point(&square, 2.5)?.coords());

    let corner = make_e_phi(std::f64::consts::FRAC_PI_3)?;
    println!("E_phi angle at the corner: {:.6}", vertex_angle(&corner, 1)?);
    println!("{}", corner.to_json_string());

    match Polygon::from_xy(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)], true) {
        Err(e) => println!("bowtie rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

//! Integral Menger curvature energies of simple polygons.
//!
//! For a polygon `P` and exponent `p` the crate evaluates the corner-truncated
//! energies
//!
//! * `M_p(P; δ) = ∫∫∫ κ(x, y, z)^p`, the triple integral of inverse circumradii,
//! * `I_p(P; δ) = ∫∫ κ_i(x, y)^p`, with `κ_i(x, y) = sup_z κ(x, y, z)`,
//! * `U_p(P; δ) = ∫ κ_G(x)^p`, with `κ_G(x) = sup_{y,z} κ(x, y, z)`,
//!
//! where the outer variables avoid a `δ`-neighbourhood of each corner. On top
//! of these it classifies the `δ → 0` behaviour, locates the critical
//! exponents (3 for `M`, 2 for `I`, 1 for `U`), and checks the geometric
//! inequalities that bound the energies by corner contributions.
//!
//! Modules:
//!
//! * [`geom`]: points, validated polygons, the kernel `κ`, model corners.
//! * [`sup`]: the sup kernels `κ_i` and `κ_G`.
//! * [`mesh`], [`gauss`], [`energy`]: graded panel quadrature.
//! * [`monte_carlo`]: seeded Monte Carlo estimates.
//! * [`asymptotics`]: dyadic series, divergence classes, critical exponents.
//! * [`inequalities`]: corner bound, straightening map, push-forward checks.
//! * [`decomposition`]: corner sets, separation constants, upper bounds.
//! * [`cli`]: the `menger` command line.
//!
//! Runnable examples, one per capability (`cargo run --example <name>`):
//!
//! * `menger_kernel`: `κ` on sample triples and its invariances.
//! * `sup_kernels`: `κ_i` and `κ_G` against closed forms on the right corner.
//! * `corner_energy`: truncated `M`, `I`, `U` energies of the square.
//! * `monte_carlo`: Monte Carlo against quadrature.
//! * `divergence_series`: dyadic series and their classification.
//! * `critical_exponent`: bisection for the critical exponents.
//! * `inequality_checks`: the inequality suites over a sweep of angles.
//! * `corner_decomposition`: corner sets and the assembled upper bound.
//!
//! ```
//! use menger::energy::{energy, EnergyKind};
//! use menger::geom::make_e_phi;
//! use menger::mesh::{QuadratureSpec, TruncationSpec};
//!
//! let corner = make_e_phi(std::f64::consts::FRAC_PI_2).unwrap();
//! let delta = (-1.0f64).exp();
//! let r = energy(&corner, EnergyKind::U, 1.0, &TruncationSpec::new(delta), &QuadratureSpec::default()).unwrap();
//! assert!((r.value - 4.0).abs() < 1e-9);
//! ```

pub mod asymptotics;
pub mod cli;
pub mod decomposition;
pub mod energy;
pub mod error;
pub mod gauss;
pub mod geom;
pub mod inequalities;
pub mod mesh;
pub mod monte_carlo;
pub mod parallel;
mod search;
pub mod sup;

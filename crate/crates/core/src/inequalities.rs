//! Numerical checks of the corner estimates.
//!
//! * the pointwise bound `κ(x,y,z) ≤ c(φ)·2ζ/(√(ξ²+ζ²)·√(η²+ζ²))` on `E_φ`
//! * the straightening map `f: E_φ → E_{π/2}` and `κ ≤ c(φ)·κ∘f`
//! * change of variables under a stretch `g(x) = x/c`
//! * the resulting energy comparison between `E_φ` and `E_{π/2}`
//!
//! Violations are reported relative to `max(1, |rhs|)`; a check passes when
//! the largest one is at most [`PASS_TOL`].

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{energy, EnergyKind};
use crate::error::{Error, Result};
use crate::gauss::GaussLegendre;
use crate::geom::{kappa, make_e_phi, unit_direction, Point, PointTriple};
use crate::mesh::{QuadratureSpec, TruncationSpec};

pub const PASS_TOL: f64 = 1e-10;
const ON_CORNER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub samples: usize,
    /// Largest `(lhs − rhs)/max(1, |rhs|)` seen.
    pub max_violation: f64,
    /// Inputs at the largest violation.
    pub witness: Vec<f64>,
    pub pass: bool,
}

struct Tracker {
    worst: f64,
    witness: Vec<f64>,
}

impl Tracker {
    fn new() -> Self {
        Self {
            worst: f64::NEG_INFINITY,
            witness: Vec::new(),
        }
    }

    fn offer(&mut self, lhs: f64, rhs: f64, witness: impl FnOnce() -> Vec<f64>) {
        let v = (lhs - rhs) / rhs.abs().max(1.0);
        if v > self.worst || v.is_nan() {
            self.worst = if v.is_nan() { f64::INFINITY } else { v };
            self.witness = witness();
        }
    }

    fn report(self, check: &str, samples: usize) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            samples,
            max_violation: self.worst,
            witness: self.witness,
            pass: self.worst <= PASS_TOL,
        }
    }
}

fn check_angle(phi: f64) -> Result<()> {
    if !(phi > 0.0 && phi < TAU) || phi == PI {
        return Err(Error::InvalidArgument(format!(
            "angle must lie in (0, 2π) without π, got {phi}"
        )));
    }
    Ok(())
}

/// The constant `c(φ)`: `sin φ` on `[π/2, π)`, `sin φ/(1 − cos φ)` on
/// `(0, π/2)`, and `c(2π − φ)` on `(π, 2π)`.
pub fn c_phi(phi: f64) -> Result<f64> {
    check_angle(phi)?;
    let phi = if phi > PI { TAU - phi } else { phi };
    if phi >= PI / 2.0 {
        Ok(phi.sin())
    } else {
        Ok(phi.sin() / (1.0 - phi.cos()))
    }
}

/// Uniform draw from `(0, 1]`.
fn unit_open_closed(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

fn corner_point(phi: f64, t: f64) -> Point {
    let (c, s) = unit_direction(phi);
    Point::xy(t * c, t * s)
}

/// Samples `(ξ, η, ζ) ∈ (0,1]³` and checks
/// `κ((ξ,0), (η,0), ζ(cos φ, sin φ)) ≤ c(φ)·2ζ/(√(ξ²+ζ²)·√(η²+ζ²))`.
pub fn corner_bound_check(phi: f64, samples: usize, seed: u64) -> Result<CheckReport> {
    let c = c_phi(phi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tracker::new();
    for _ in 0..samples {
        let (xi, eta, zeta) = (
            unit_open_closed(&mut rng),
            unit_open_closed(&mut rng),
            unit_open_closed(&mut rng),
        );
        let tri = PointTriple::new(Point::xy(xi, 0.0), Point::xy(eta, 0.0), corner_point(phi, zeta))?;
        let lhs = kappa(&tri);
        let rhs = c * 2.0 * zeta / ((xi * xi + zeta * zeta).sqrt() * (eta * eta + zeta * zeta).sqrt());
        t.offer(lhs, rhs, || vec![xi, eta, zeta]);
    }
    Ok(t.report("corner_bound", samples))
}

/// `f: E_φ → E_{π/2}`: identity on `[0,1]×{0}`, `t(cos φ, sin φ) ↦ (0, t)`.
pub fn straightening_map(phi: f64, x: &Point) -> Result<Point> {
    check_angle(phi)?;
    if x.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.dim(),
        });
    }
    let (a, b) = (x.coords()[0], x.coords()[1]);
    if b.abs() <= ON_CORNER_TOL && (-ON_CORNER_TOL..=1.0 + ON_CORNER_TOL).contains(&a) {
        return Ok(x.clone());
    }
    let (c, s) = unit_direction(phi);
    let t = a * c + b * s;
    let off = (a - t * c).hypot(b - t * s);
    if off <= ON_CORNER_TOL && (-ON_CORNER_TOL..=1.0 + ON_CORNER_TOL).contains(&t) {
        return Ok(Point::xy(0.0, t));
    }
    Err(Error::NotOnPolygon(off.min(b.abs())))
}

/// Lipschitz constants `(Lip f, Lip f⁻¹)` of the straightening map.
///
/// For `x` on one edge and `z` on the other at distances `ξ`, `t` from the
/// corner, `|x − z|² = ξ² + t² − 2ξt·cos φ` while `|f(x) − f(z)|² = ξ² + t²`;
/// the extreme ratios occur at `ξ = t`.
pub fn straightening_lipschitz(phi: f64) -> Result<(f64, f64)> {
    check_angle(phi)?;
    let c = phi.cos();
    let lip = if c > 0.0 { 1.0 / (1.0 - c).sqrt() } else { 1.0 };
    let lip_inv = (1.0 + (-c).max(0.0)).sqrt();
    Ok((lip, lip_inv))
}

/// Random triples on `E_φ` with points on both edges, checking
/// `κ(x,y,z) ≤ c(φ)·κ(f(x), f(y), f(z))`; same-edge triples must give zero
/// on both sides. Also checks the Lipschitz constants on random pairs.
pub fn straightening_check(phi: f64, samples: usize, seed: u64) -> Result<CheckReport> {
    let c = c_phi(phi)?;
    let (lip, lip_inv) = straightening_lipschitz(phi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tracker::new();
    let point = |slanted: bool, s: f64| {
        if slanted {
            corner_point(phi, s)
        } else {
            Point::xy(s, 0.0)
        }
    };
    for _ in 0..samples {
        let sides = loop {
            let b: [bool; 3] = [rng.random(), rng.random(), rng.random()];
            if !(b[0] == b[1] && b[1] == b[2]) {
                break b;
            }
        };
        let ts = [
            unit_open_closed(&mut rng),
            unit_open_closed(&mut rng),
            unit_open_closed(&mut rng),
        ];
        let pts: Vec<Point> = (0..3).map(|k| point(sides[k], ts[k])).collect();
        let imgs: Vec<Point> = pts
            .iter()
            .map(|p| straightening_map(phi, p))
            .collect::<Result<_>>()?;
        let lhs = kappa(&PointTriple::new(pts[0].clone(), pts[1].clone(), pts[2].clone())?);
        let rhs = c * kappa(&PointTriple::new(imgs[0].clone(), imgs[1].clone(), imgs[2].clone())?);
        let wit = || {
            let mut w: Vec<f64> = sides.iter().map(|&s| s as u8 as f64).collect();
            w.extend(ts);
            w
        };
        t.offer(lhs, rhs, wit);

        // distance distortion on a mixed pair
        let (d, df) = (pts[0].distance(&pts[1]), imgs[0].distance(&imgs[1]));
        if d > 0.0 {
            t.offer(df, lip * d, wit);
            t.offer(d, lip_inv * df, wit);
        }

        // one same-edge triple per sample: κ vanishes on both sides
        let side: bool = rng.random();
        let same: Vec<Point> = (0..3).map(|_| point(side, unit_open_closed(&mut rng))).collect();
        let img: Vec<Point> = same
            .iter()
            .map(|p| straightening_map(phi, p))
            .collect::<Result<_>>()?;
        let k0 = kappa(&PointTriple::new(same[0].clone(), same[1].clone(), same[2].clone())?);
        let k1 = kappa(&PointTriple::new(img[0].clone(), img[1].clone(), img[2].clone())?);
        t.offer(k0.max(k1), 0.0, || same.iter().flat_map(|p| p.coords().to_vec()).collect());
    }
    Ok(t.report("straightening", samples))
}

/// Test integrands on `[0, 1]ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestIntegrand {
    /// `f ≡ 1`.
    Constant,
    /// `f(y) = y₁·…·yₙ`.
    Product,
}

impl TestIntegrand {
    fn eval(self, y: &[f64]) -> f64 {
        match self {
            TestIntegrand::Constant => 1.0,
            TestIntegrand::Product => y.iter().product(),
        }
    }
}

fn tensor_integral(rule: &GaussLegendre, hi: f64, n: usize, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let m = rule.order();
    let h = 0.5 * hi;
    let mut idx = vec![0usize; n];
    let mut y = vec![0.0; n];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for k in 0..n {
            y[k] = h + h * rule.nodes[idx[k]];
            w *= h * rule.weights[idx[k]];
        }
        total += w * f(&y);
        let mut k = 0;
        loop {
            if k == n {
                return total;
            }
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Change of variables under `g(x) = x/c` from `X = [0, c]` to `Y = [0, 1]`
/// (`g⁻¹` is `c`-Lipschitz): checks `∫_{Xⁿ} f∘g ≤ cⁿ ∫_{Yⁿ} f`, which holds
/// with equality here. `samples` is the total node budget of the tensor
/// Gauss–Legendre rule. The witness is `[lhs, rhs]`.
pub fn pushforward_check(stretch: f64, arity: usize, samples: usize, integrand: TestIntegrand) -> Result<CheckReport> {
    if !(stretch >= 1.0 && stretch.is_finite()) {
        return Err(Error::InvalidArgument(format!("stretch must be at least 1, got {stretch}")));
    }
    if !(1..=3).contains(&arity) {
        return Err(Error::InvalidArgument(format!("arity must be 1, 2 or 3, got {arity}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let per_axis = ((samples as f64).powf(1.0 / arity as f64).floor() as usize).clamp(1, 64);
    let rule = GaussLegendre::new(per_axis);
    let lhs = tensor_integral(&rule, stretch, arity, &|x| {
        let y: Vec<f64> = x.iter().map(|v| v / stretch).collect();
        integrand.eval(&y)
    });
    let rhs = stretch.powi(arity as i32) * tensor_integral(&rule, 1.0, arity, &|y| integrand.eval(y));
    let mut t = Tracker::new();
    t.offer(lhs, rhs, || vec![lhs, rhs]);
    Ok(t.report("pushforward", per_axis.pow(arity as u32)))
}

/// Energy comparison at a fixed truncation:
/// `𝓔(E_φ) ≤ c(φ)^p · Lip(f⁻¹)^d · 𝓔(E_{π/2})`, `d` the arity. The
/// straightening map preserves distance to the corner along each edge, so the
/// truncation carries over unchanged. The witness is
/// `[lhs, rhs, c(φ)^p·𝓔(E_{π/2})]`.
pub fn energy_comparison_check(
    kind: EnergyKind,
    phi: f64,
    p: f64,
    delta: f64,
    spec: &QuadratureSpec,
    rel_tol: f64,
) -> Result<CheckReport> {
    let c = c_phi(phi)?;
    let (_, lip_inv) = straightening_lipschitz(phi)?;
    let trunc = TruncationSpec::new(delta);
    let lhs = energy(&make_e_phi(phi)?, kind, p, &trunc, spec)?.value;
    let reference = energy(&make_e_phi(PI / 2.0)?, kind, p, &trunc, spec)?.value;
    let bare = c.powf(p) * reference;
    let rhs = bare * lip_inv.powi(kind.arity() as i32);
    let v = (lhs - rhs) / rhs.abs().max(1.0);
    Ok(CheckReport {
        check: format!("energy_comparison_{kind}"),
        samples: 1,
        max_violation: v,
        witness: vec![lhs, rhs, bare],
        pass: v <= rel_tol,
    })
}

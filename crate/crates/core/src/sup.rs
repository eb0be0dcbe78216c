//! The intermediate kernels
//!
//! * `κ_i(x, y) = sup_z κ(x, y, z)`
//! * `κ_G(x) = sup_{y,z} κ(x, y, z)`
//!
//! over a polygon, plus closed forms on the right-angle corner.
//!
//! Suprema are taken edge by edge. When one of the fixed points lies on the
//! edge being searched the supremum has an exact expression (the edge line
//! passes through that point, so only the distance to the edge matters);
//! otherwise a graded grid with golden-section refinement is used.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{kappa_sq_coords, norm2, sub, Point, Polygon, Segment};
use crate::search::{maximize, Maximum};

/// Tolerance (relative to the diameter) for accepting input points as lying
/// on the polygon.
pub const ON_POLYGON_RTOL: f64 = 1e-9;
/// Tolerance (relative to the diameter) for treating a point as lying on a
/// particular edge when choosing the exact branch.
const MEMBER_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupResult {
    pub value: f64,
    /// Points achieving or approaching the supremum: `[z]` for `κ_i`,
    /// `[y, z]` for `κ_G`.
    pub argmax: Vec<Point>,
    pub converged: bool,
    pub tolerance: f64,
}

/// Edge-wise supremum machinery for one polygon.
pub(crate) struct SupEngine {
    segs: Vec<Segment>,
    /// Corner vertex coordinates (angle ≠ π).
    corners: Vec<Vec<f64>>,
    member_tol: f64,
    diam: f64,
}

/// Best value of `κ²` on one edge and its parameter.
#[derive(Debug, Clone, Copy)]
struct EdgeMax {
    sq: f64,
    s: f64,
    converged: bool,
}

impl EdgeMax {
    const ZERO: EdgeMax = EdgeMax {
        sq: 0.0,
        s: 0.0,
        converged: true,
    };
}

impl SupEngine {
    pub fn new(p: &Polygon) -> Self {
        let diam = p.diameter();
        Self {
            segs: p.segments(),
            corners: p
                .corner_vertices()
                .into_iter()
                .map(|i| p.vertices()[i].coords().to_vec())
                .collect(),
            member_tol: MEMBER_RTOL * diam,
            diam,
        }
    }

    pub fn diameter(&self) -> f64 {
        self.diam
    }

    pub fn distance_to_polygon(&self, x: &[f64]) -> f64 {
        self.segs
            .iter()
            .map(|s| s.dist(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn membership(&self, x: &[f64]) -> Vec<bool> {
        self.segs
            .iter()
            .map(|s| s.dist(x) <= self.member_tol)
            .collect()
    }

    /// `sup_{z ∈ edge} κ²(x, y, z)`.
    fn sup_edge(&self, x: &[f64], y: &[f64], x_on: bool, y_on: bool, e: usize, tol: f64) -> EdgeMax {
        let seg = &self.segs[e];
        if x == y || (x_on && y_on) {
            return EdgeMax::ZERO;
        }
        if x_on || y_on {
            // the edge line passes through the on-edge point
            let (on, off) = if x_on { (x, y) } else { (y, x) };
            let dseg = seg.dist(off);
            let dline = seg.dist_to_line(off);
            if dseg == 0.0 || dline == 0.0 {
                return EdgeMax::ZERO;
            }
            let k = 2.0 * dline / (norm2(&sub(on, off)).sqrt() * dseg);
            return EdgeMax {
                sq: k * k,
                s: seg.closest_param(off),
                converged: true,
            };
        }
        let scale = seg.dist(x).min(seg.dist(y)) / (8.0 * seg.len);
        let anchors = [0.0, 1.0, seg.closest_param(x), seg.closest_param(y)];
        let mut z = vec![0.0; x.len()];
        let m: Maximum = maximize(
            |s| {
                seg.at_into(s, &mut z);
                kappa_sq_coords(x, y, &z)
            },
            &anchors,
            scale,
            tol * tol,
        );
        EdgeMax {
            sq: m.value,
            s: m.arg,
            converged: m.converged,
        }
    }

    /// `κ_i(x, y)` with precomputed edge memberships. Returns the value, the
    /// maximizing edge and parameter, and the convergence flag.
    pub fn kappa_i_with(
        &self,
        x: &[f64],
        y: &[f64],
        x_on: &[bool],
        y_on: &[bool],
        tol: f64,
    ) -> (f64, usize, f64, bool) {
        let mut best = (0.0, 0, 0.0, true);
        let mut best_sq = 0.0;
        for e in 0..self.segs.len() {
            let m = self.sup_edge(x, y, x_on[e], y_on[e], e, tol);
            best.3 &= m.converged;
            if m.sq > best_sq {
                best_sq = m.sq;
                best = (0.0, e, m.s, best.3);
            }
        }
        best.0 = best_sq.sqrt();
        best
    }

    /// Limit of `κ_i(x, y)` as `y → x` along edge `e` (`x` interior to the
    /// edge): `sup_z 2·dist(z, L_e)/|x − z|²`. Quadrature uses it on the
    /// diagonal, where the coincident-point convention would give 0.
    pub fn kappa_i_tangent(&self, x: &[f64], e: usize, tol: f64) -> f64 {
        let line = &self.segs[e];
        let mut best = 0.0f64;
        for (f, seg) in self.segs.iter().enumerate() {
            if f == e {
                continue;
            }
            let scale = seg.dist(x) / (8.0 * seg.len);
            let mut z = vec![0.0; x.len()];
            let m = maximize(
                |s| {
                    seg.at_into(s, &mut z);
                    let r2: f64 = x.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
                    if r2 == 0.0 {
                        return 0.0;
                    }
                    let k = 2.0 * line.dist_to_line(&z) / r2;
                    k * k
                },
                &[0.0, 1.0, seg.closest_param(x)],
                scale,
                tol * tol,
            );
            best = best.max(m.value);
        }
        best.sqrt()
    }

    pub fn kappa_i_value(&self, x: &[f64], y: &[f64], tol: f64) -> f64 {
        let xo = self.membership(x);
        let yo = self.membership(y);
        self.kappa_i_with(x, y, &xo, &yo, tol).0
    }

    fn is_corner(&self, x: &[f64]) -> Option<usize> {
        self.corners
            .iter()
            .position(|c| norm2(&sub(c, x)).sqrt() <= self.member_tol)
    }

    /// `κ_G(x)`. Returns the value, the two maximizing points and the
    /// convergence flag.
    pub fn kappa_g_with(&self, x: &[f64], x_on: &[bool], tol: f64) -> (f64, Vec<f64>, Vec<f64>, bool) {
        if let Some(i) = self.is_corner(x) {
            let c = self.corners[i].clone();
            return (f64::INFINITY, c.clone(), c, true);
        }
        let m = self.segs.len();
        let mut best_sq = 0.0;
        let mut arg = (x.to_vec(), x.to_vec());
        let mut converged = true;
        let mut offer = |sq: f64, y: Vec<f64>, z: Vec<f64>| {
            if sq > best_sq {
                best_sq = sq;
                arg = (y, z);
            }
        };
        for a in 0..m {
            let sa = &self.segs[a];
            // y and z on the same edge: both tend to the point nearest x
            if !x_on[a] {
                let dline = sa.dist_to_line(x);
                let dseg = sa.dist(x);
                if dline > 0.0 && dseg > 0.0 {
                    let k = 2.0 * dline / (dseg * dseg);
                    let q = sa.closest_point(x);
                    offer(k * k, q.clone(), q);
                }
            }
            for b in a + 1..m {
                if x_on[a] && x_on[b] {
                    // x is a straight vertex between collinear edges
                    continue;
                }
                if x_on[a] || x_on[b] {
                    let (own, other) = if x_on[a] { (a, b) } else { (b, a) };
                    let r = self.sup_pair_with_own_edge(x, own, other, tol);
                    converged &= r.2;
                    offer(r.0, r.1 .0, r.1 .1);
                } else {
                    let r = self.sup_pair_nested(x, a, b, tol);
                    converged &= r.2;
                    offer(r.0, r.1 .0, r.1 .1);
                }
            }
        }
        (best_sq.sqrt(), arg.0, arg.1, converged)
    }

    /// `sup κ²(x, y, z)` over `y` on the edge containing `x` and `z` on
    /// `other`. The inner supremum over `y` is exact.
    fn sup_pair_with_own_edge(
        &self,
        x: &[f64],
        own: usize,
        other: usize,
        tol: f64,
    ) -> (f64, (Vec<f64>, Vec<f64>), bool) {
        let so = &self.segs[own];
        let st = &self.segs[other];
        let inner = |z: &[f64]| -> f64 {
            let dseg = so.dist(z);
            let dline = so.dist_to_line(z);
            // at a shared endpoint the value is a limit; the same-edge branch
            // for `other` covers it
            if dseg == 0.0 || dline == 0.0 {
                return 0.0;
            }
            let k = 2.0 * dline / (norm2(&sub(x, z)).sqrt() * dseg);
            k * k
        };
        let scale = st.dist(x) / (8.0 * st.len);
        let mut z = vec![0.0; x.len()];
        let m = maximize(
            |s| {
                st.at_into(s, &mut z);
                inner(&z)
            },
            &[0.0, 1.0, st.closest_param(x)],
            scale,
            tol * tol,
        );
        let zb = st.at(m.arg);
        let yb = so.closest_point(&zb);
        (m.value, (yb, zb), m.converged)
    }

    /// Nested search: outer `y` on edge `a`, inner `z` on edge `b`.
    fn sup_pair_nested(&self, x: &[f64], a: usize, b: usize, tol: f64) -> (f64, (Vec<f64>, Vec<f64>), bool) {
        let sa = &self.segs[a];
        let mut y = vec![0.0; x.len()];
        let mut converged = true;
        let scale = sa.dist(x) / (8.0 * sa.len);
        let m = maximize(
            |s| {
                sa.at_into(s, &mut y);
                let r = self.sup_edge(x, &y, false, false, b, tol);
                converged &= r.converged;
                r.sq
            },
            &[0.0, 1.0, sa.closest_param(x)],
            scale,
            tol * tol,
        );
        let yb = sa.at(m.arg);
        let inner = self.sup_edge(x, &yb, false, false, b, tol);
        let zb = self.segs[b].at(inner.s);
        (m.value.max(inner.sq), (yb, zb), converged && m.converged)
    }

    pub fn kappa_g_value(&self, x: &[f64], tol: f64) -> f64 {
        let xo = self.membership(x);
        self.kappa_g_with(x, &xo, tol).0
    }

    pub fn segment_point(&self, e: usize, s: f64) -> Vec<f64> {
        self.segs[e].at(s)
    }
}

fn check_inputs(p: &Polygon, pts: &[&Point], tol: f64, engine: &SupEngine) -> Result<()> {
    if !p.is_validated() {
        return Err(Error::Unvalidated);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    for q in pts {
        if q.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                got: q.dim(),
            });
        }
        let d = engine.distance_to_polygon(q.coords());
        if d > ON_POLYGON_RTOL * engine.diameter() {
            return Err(Error::NotOnPolygon(d));
        }
    }
    Ok(())
}

/// `κ_i(x, y) = sup_{z ∈ P} κ(x, y, z)`.
///
/// `x` and `y` must lie on `P` (within `1e-9` of the diameter).
pub fn kappa_i(p: &Polygon, x: &Point, y: &Point, tol: f64) -> Result<SupResult> {
    let engine = SupEngine::new(p);
    check_inputs(p, &[x, y], tol, &engine)?;
    let xo = engine.membership(x.coords());
    let yo = engine.membership(y.coords());
    let (value, e, s, converged) = engine.kappa_i_with(x.coords(), y.coords(), &xo, &yo, tol);
    Ok(SupResult {
        value,
        argmax: vec![Point::new(engine.segment_point(e, s))?],
        converged,
        tolerance: tol,
    })
}

/// `κ_G(x) = sup_{y, z ∈ P} κ(x, y, z)`; `+∞` at a corner vertex.
pub fn kappa_g(p: &Polygon, x: &Point, tol: f64) -> Result<SupResult> {
    let engine = SupEngine::new(p);
    check_inputs(p, &[x], tol, &engine)?;
    let xo = engine.membership(x.coords());
    let (value, y, z, converged) = engine.kappa_g_with(x.coords(), &xo, tol);
    Ok(SupResult {
        value,
        argmax: vec![Point::new(y)?, Point::new(z)?],
        converged,
        tolerance: tol,
    })
}

/// `κ_i((ξ,0), (η,0))` on `E_{π/2}`: `2/(ξ+η)`.
pub fn kappa_i_corner_closed_form(xi: f64, eta: f64) -> Result<f64> {
    if !(xi > 0.0 && xi <= 1.0 && eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "corner coordinates must lie in (0, 1], got ({xi}, {eta})"
        )));
    }
    Ok(2.0 / (xi + eta))
}

/// `κ_G((t,0))` on `E_{π/2}`: `2/t`.
pub fn kappa_g_corner_closed_form(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "corner distance must lie in (0, 1], got {t}"
        )));
    }
    Ok(2.0 / t)
}

//! Corner-graded panel meshes.
//!
//! Each edge is cut into panels in arc length. Around every corner vertex an
//! interval of length `δ` is removed and panel boundaries are placed at
//! `δ, δρ, δρ², …` from the corner; whatever remains in the middle of the
//! edge forms one last panel, split at the edge midpoint when both ends are
//! corners (the sup kernels switch their dominant corner there).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussLegendre;
use crate::geom::Polygon;

/// Corner exclusion radius for the outer integration variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub delta: f64,
}

impl TruncationSpec {
    pub fn new(delta: f64) -> Self {
        Self { delta }
    }

    /// Checks `δ` against every edge: an edge with corners at both ends needs
    /// `2δ < length`, an edge with one corner needs `δ < length`.
    pub fn validate(&self, p: &Polygon) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidTruncation {
                delta: self.delta,
                edge: 0,
                limit: 0.0,
            });
        }
        let corners = corner_flags(p);
        for e in 0..p.edge_count() {
            let (a, b) = p.edge_vertices(e);
            let n = corners[a] as usize + corners[b] as usize;
            let len = p.edge_length(e);
            let limit = if n == 2 { len / 2.0 } else { len };
            if n > 0 && self.delta >= limit {
                return Err(Error::InvalidTruncation {
                    delta: self.delta,
                    edge: e,
                    limit,
                });
            }
        }
        Ok(())
    }
}

/// Panel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    /// Grading ratio between consecutive panel boundaries.
    pub ratio: f64,
    /// Maximum number of graded boundaries beyond `δ` per corner.
    pub depth: usize,
    /// Target relative tolerance for the sup searches.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            order: 16,
            ratio: 2.0,
            depth: 24,
            rel_tol: 1e-12,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidQuadrature(format!(
                "panel order must be at least 2, got {}",
                self.order
            )));
        }
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return Err(Error::InvalidQuadrature(format!(
                "grading ratio must exceed 1, got {}",
                self.ratio
            )));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidQuadrature(format!(
                "tolerance must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Sub-interval `[start, end]` of an edge, in arc length from the edge's
/// first vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Panel {
    pub edge: usize,
    pub start: f64,
    pub end: f64,
    /// Arc-length distance to the nearest corner on this edge (`∞` if the
    /// edge has none).
    pub corner_dist: f64,
}

impl Panel {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelMesh {
    pub panels: Vec<Panel>,
    pub edge_lengths: Vec<f64>,
    pub delta: f64,
}

impl PanelMesh {
    pub fn edge_panels(&self, e: usize) -> impl Iterator<Item = &Panel> {
        self.panels.iter().filter(move |p| p.edge == e)
    }
}

pub(crate) fn corner_flags(p: &Polygon) -> Vec<bool> {
    let mut flags = vec![false; p.vertex_count()];
    for i in p.corner_vertices() {
        flags[i] = true;
    }
    flags
}

/// Graded boundaries `δρʲ` measured from a corner, `j = 0..=depth`, kept
/// while below `limit`.
fn graded(delta: f64, ratio: f64, depth: usize, limit: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut r = 1.0;
    for _ in 0..=depth {
        let b = delta * r;
        if b >= limit {
            break;
        }
        out.push(b);
        r *= ratio;
    }
    out
}

/// Builds the panel partition of `P` minus the `δ`-neighbourhoods of its
/// corners.
pub fn build_graded_mesh(p: &Polygon, trunc: &TruncationSpec, spec: &QuadratureSpec) -> Result<PanelMesh> {
    if !p.is_validated() {
        return Err(Error::Unvalidated);
    }
    spec.validate()?;
    trunc.validate(p)?;
    let corners = corner_flags(p);
    let mut panels = Vec::new();
    let mut edge_lengths = Vec::with_capacity(p.edge_count());
    for e in 0..p.edge_count() {
        let (a, b) = p.edge_vertices(e);
        let len = p.edge_length(e);
        edge_lengths.push(len);
        let (ca, cb) = (corners[a], corners[b]);
        let limit = if ca && cb { len / 2.0 } else { len };
        let g = graded(trunc.delta, spec.ratio, spec.depth, limit);
        let mut cuts: Vec<(f64, f64)> = Vec::new(); // (position, corner distance of the panel starting here)
        if ca {
            cuts.extend(g.iter().map(|&d| (d, d)));
        } else {
            cuts.push((0.0, f64::INFINITY));
        }
        let mut first_tail = cuts.len();
        if ca && cb {
            let (last, _) = cuts[first_tail - 1];
            let mid = 0.5 * len;
            if last < mid && len - g[g.len() - 1] > mid {
                cuts.push((mid, mid));
                first_tail += 1;
            }
        }
        if cb {
            for &d in g.iter().rev() {
                cuts.push((len - d, d));
            }
        } else {
            cuts.push((len, f64::INFINITY));
        }
        for w in 0..cuts.len() - 1 {
            let (s, ds) = cuts[w];
            let (t, dt) = cuts[w + 1];
            // the panel's distance to the nearest corner is at its inner end
            let dist = if w + 1 < first_tail {
                ds
            } else if w + 1 == first_tail {
                ds.min(dt)
            } else {
                dt
            };
            panels.push(Panel {
                edge: e,
                start: s,
                end: t,
                corner_dist: dist,
            });
        }
    }
    Ok(PanelMesh {
        panels,
        edge_lengths,
        delta: trunc.delta,
    })
}

/// Quadrature nodes of a mesh, flattened.
#[derive(Debug, Clone)]
pub(crate) struct NodeSet {
    pub dim: usize,
    pub coords: Vec<f64>,
    pub weights: Vec<f64>,
}

impl NodeSet {
    pub fn build(p: &Polygon, mesh: &PanelMesh, order: usize) -> Self {
        let rule = GaussLegendre::new(order);
        let dim = p.dim();
        let segs = p.segments();
        let n = mesh.panels.len() * order;
        let mut coords = Vec::with_capacity(n * dim);
        let mut weights = Vec::with_capacity(n);
        for panel in &mesh.panels {
            let seg = &segs[panel.edge];
            let len = mesh.edge_lengths[panel.edge];
            let half = 0.5 * (panel.end - panel.start);
            let mid = 0.5 * (panel.start + panel.end);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let u = mid + half * x;
                let s = u / len;
                for k in 0..dim {
                    coords.push(seg.a[k] + s * seg.d[k]);
                }
                weights.push(half * w);
            }
        }
        Self {
            dim,
            coords,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::make_e_phi;
    use std::f64::consts::FRAC_PI_2;

    fn square() -> Polygon {
        Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true).unwrap()
    }

    #[test]
    fn depth_zero_gives_two_panels_per_edge() {
        let spec = QuadratureSpec {
            depth: 0,
            ..Default::default()
        };
        let m = build_graded_mesh(&square(), &TruncationSpec::new(0.1), &spec).unwrap();
        // the middle is split at the edge midpoint
        assert_eq!(m.panels.len(), 8);
        assert_eq!(m.panels[0].start, 0.1);
        assert_eq!(m.panels[0].end, 0.5);
        assert_eq!(m.panels[1].end, 0.9);
    }

    #[test]
    fn boundaries_are_dyadic_from_corner() {
        let delta = 2f64.powi(-10);
        let spec = QuadratureSpec {
            depth: 3,
            ..Default::default()
        };
        let e = make_e_phi(FRAC_PI_2).unwrap();
        let m = build_graded_mesh(&e, &TruncationSpec::new(delta), &spec).unwrap();
        // second edge starts at the corner
        let starts: Vec<f64> = m.edge_panels(1).map(|p| p.start).collect();
        assert_eq!(starts, vec![delta, 2.0 * delta, 4.0 * delta, 8.0 * delta]);
        assert_eq!(m.edge_panels(1).last().unwrap().end, 1.0);
        // first edge ends at the corner
        let ends: Vec<f64> = m.edge_panels(0).map(|p| p.end).collect();
        assert_eq!(ends, vec![1.0 - 8.0 * delta, 1.0 - 4.0 * delta, 1.0 - 2.0 * delta, 1.0 - delta]);
        assert_eq!(m.edge_panels(0).next().unwrap().start, 0.0);
    }

    #[test]
    fn panels_tile_the_truncated_edges() {
        let m = build_graded_mesh(&square(), &TruncationSpec::new(0.001), &QuadratureSpec::default()).unwrap();
        for e in 0..4 {
            let ps: Vec<_> = m.edge_panels(e).collect();
            assert_eq!(ps.first().unwrap().start, 0.001);
            assert_eq!(ps.last().unwrap().end, 1.0 - 0.001);
            for w in ps.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
            let total: f64 = ps.iter().map(|p| p.len()).sum();
            assert!((total - 0.998).abs() < 1e-14);
        }
    }

    #[test]
    fn truncation_limits() {
        let e = make_e_phi(FRAC_PI_2).unwrap();
        let spec = QuadratureSpec::default();
        assert!(build_graded_mesh(&e, &TruncationSpec::new(1.0), &spec).is_err());
        assert!(build_graded_mesh(&e, &TruncationSpec::new(0.5), &spec).is_ok());
        assert!(matches!(
            build_graded_mesh(&square(), &TruncationSpec::new(0.5), &spec),
            Err(Error::InvalidTruncation { .. })
        ));
    }

    #[test]
    fn straight_polyline_has_no_truncation() {
        let p = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], false).unwrap();
        let m = build_graded_mesh(&p, &TruncationSpec::new(0.1), &QuadratureSpec::default()).unwrap();
        assert_eq!(m.panels.len(), 2);
        assert!(m.panels.iter().all(|p| p.corner_dist.is_infinite()));
    }

    #[test]
    fn bad_quadrature_specs() {
        let e = make_e_phi(FRAC_PI_2).unwrap();
        for spec in [
            QuadratureSpec { order: 1, ..Default::default() },
            QuadratureSpec { ratio: 1.0, ..Default::default() },
        ] {
            assert!(matches!(
                build_graded_mesh(&e, &TruncationSpec::new(0.1), &spec),
                Err(Error::InvalidQuadrature(_))
            ));
        }
    }
}

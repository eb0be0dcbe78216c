//! Splitting a polygon into corner pieces and straight middles, and the
//! explicit finite upper bounds assembled from that split.
//!
//! Straight vertices are merged away first, so an effective edge is a
//! maximal straight run between corners (or open endpoints). Each corner gets
//! a corner set `E_i`: two legs of length `ε` along its effective edges, a
//! copy of `ε·E_{φ_i}`. What remains of each effective edge is its middle
//! `Y_i`.

use serde::Serialize;

use crate::energy::EnergyKind;
use crate::error::{Error, Result};
use crate::geom::{segment_distance, vertex_angle, Polygon, Segment};
use crate::inequalities::c_phi;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerSet {
    pub vertex: usize,
    pub angle: f64,
    pub scale: f64,
    /// The two legs, each `[corner, leg end]`.
    pub legs: [[Vec<f64>; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiddleSegment {
    /// Effective edge index.
    pub edge: usize,
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerDecomposition {
    pub epsilon: f64,
    /// Shortest effective edge.
    pub shortest_edge: f64,
    pub corners: Vec<CornerSet>,
    pub middles: Vec<MiddleSegment>,
    /// Effective edges as `[start, end]`.
    pub edges: Vec<[Vec<f64>; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationConstants {
    /// `min_i dist(Y_i, P ∖ X_i)/4`, `∞` if there is nothing to separate.
    pub d1: f64,
    /// `min_{i≠j} dist(E_i, E_j)/4`, `∞` with fewer than two corners.
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBound {
    pub bulk: f64,
    pub corners: f64,
    pub total: f64,
}

/// Breakpoints of the effective edges: corner vertices plus open endpoints.
fn breakpoints(p: &Polygon) -> Vec<usize> {
    let mut b = p.corner_vertices();
    if !p.is_closed() {
        b.insert(0, 0);
        b.push(p.vertex_count() - 1);
    }
    b
}

fn effective_edges(p: &Polygon) -> Vec<(usize, usize)> {
    let b = breakpoints(p);
    let n = b.len();
    if p.is_closed() {
        (0..n).map(|i| (b[i], b[(i + 1) % n])).collect()
    } else {
        (0..n - 1).map(|i| (b[i], b[i + 1])).collect()
    }
}

fn toward(from: &[f64], to: &[f64], dist: f64) -> Vec<f64> {
    let len = from
        .iter()
        .zip(to)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    from.iter()
        .zip(to)
        .map(|(a, b)| a + (b - a) * (dist / len))
        .collect()
}

/// Default radius: an eighth of the shortest effective edge.
pub fn default_epsilon(p: &Polygon) -> f64 {
    shortest_effective_edge(p) / 8.0
}

fn shortest_effective_edge(p: &Polygon) -> f64 {
    let v = p.vertices();
    effective_edges(p)
        .iter()
        .map(|&(a, b)| v[a].distance(&v[b]))
        .fold(f64::INFINITY, f64::min)
}

/// Corner sets of radius `ε` and the middles between them; requires
/// `ε < λ/4` with `λ` the shortest effective edge.
pub fn corner_decomposition(p: &Polygon, eps: f64) -> Result<CornerDecomposition> {
    if !p.is_validated() {
        return Err(Error::Unvalidated);
    }
    let lambda = shortest_effective_edge(p);
    if !(eps > 0.0 && eps < lambda / 4.0) {
        return Err(Error::InvalidArgument(format!(
            "ε = {eps} must lie in (0, λ/4) with λ = {lambda}"
        )));
    }
    let v = p.vertices();
    let edges = effective_edges(p);
    let is_corner = {
        let mut f = vec![false; p.vertex_count()];
        for i in p.corner_vertices() {
            f[i] = true;
        }
        f
    };
    let mut corners = Vec::new();
    for (k, &(_, b)) in edges.iter().enumerate() {
        if !is_corner[b] {
            continue;
        }
        // corner b joins edge k (incoming) and the next effective edge
        let next = edges[(k + 1) % edges.len()];
        let c = v[b].coords();
        let prev_end = v[edges[k].0].coords();
        let next_end = v[next.1].coords();
        corners.push(CornerSet {
            vertex: b,
            angle: vertex_angle(p, b)?,
            scale: eps,
            legs: [
                [c.to_vec(), toward(c, prev_end, eps)],
                [c.to_vec(), toward(c, next_end, eps)],
            ],
        });
    }
    corners.sort_by_key(|c| c.vertex);
    let middles = edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            let (pa, pb) = (v[a].coords(), v[b].coords());
            let len = v[a].distance(&v[b]);
            let s = if is_corner[a] { eps } else { 0.0 };
            let t = if is_corner[b] { len - eps } else { len };
            MiddleSegment {
                edge: k,
                start: if s > 0.0 { toward(pa, pb, s) } else { pa.to_vec() },
                end: if t < len { toward(pb, pa, len - t) } else { pb.to_vec() },
                length: t - s,
            }
        })
        .collect();
    Ok(CornerDecomposition {
        epsilon: eps,
        shortest_edge: lambda,
        corners,
        middles,
        edges: edges
            .iter()
            .map(|&(a, b)| [v[a].coords().to_vec(), v[b].coords().to_vec()])
            .collect(),
    })
}

/// `d₁` and `d₂` by exact segment–segment distances.
pub fn separation_constants(_p: &Polygon, dec: &CornerDecomposition) -> Result<SeparationConstants> {
    let edges: Vec<Segment> = dec.edges.iter().map(|[a, b]| Segment::new(a, b)).collect();
    let mut d1 = f64::INFINITY;
    for m in &dec.middles {
        let y = Segment::new(&m.start, &m.end);
        for (j, z) in edges.iter().enumerate() {
            if j != m.edge {
                d1 = d1.min(segment_distance(&y, z) / 4.0);
            }
        }
    }
    let mut d2 = f64::INFINITY;
    let legs: Vec<Vec<Segment>> = dec
        .corners
        .iter()
        .map(|c| c.legs.iter().map(|[a, b]| Segment::new(a, b)).collect())
        .collect();
    for i in 0..legs.len() {
        for j in i + 1..legs.len() {
            for a in &legs[i] {
                for b in &legs[j] {
                    d2 = d2.min(segment_distance(a, b) / 4.0);
                }
            }
        }
    }
    if d1 <= 0.0 || d2 <= 0.0 {
        return Err(Error::InvalidArgument("decomposition pieces touch".into()));
    }
    Ok(SeparationConstants { d1, d2 })
}

/// Upper bound for the energy of `P` from the decomposition, given
/// `ref_energy = 𝓔_p(E_{π/2})`. Corner terms use `α_i = ε^{d−p}`.
pub fn assemble_upper_bound(
    p: &Polygon,
    kind: EnergyKind,
    power: f64,
    dec: &CornerDecomposition,
    sep: &SeparationConstants,
    ref_energy: f64,
) -> Result<UpperBound> {
    let threshold = kind.threshold();
    if !(power > 0.0 && power < threshold) {
        return Err(Error::AboveThreshold {
            p: power,
            threshold,
        });
    }
    if !(ref_energy >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "reference energy must be nonnegative, got {ref_energy}"
        )));
    }
    let h = p.length();
    let n = p.vertex_count() as f64;
    let inv = |d: f64| if d.is_infinite() { 0.0 } else { d.powf(-power) };
    let (a1, a2) = (inv(sep.d1), inv(sep.d2));
    let alpha = dec.epsilon.powf(kind.arity() as f64 - power);
    let mut scaled = 0.0;
    for c in &dec.corners {
        scaled += alpha * c_phi(c.angle)?.powf(power) * ref_energy;
    }
    let k = dec.corners.len() as f64;
    let (bulk, corners) = match kind {
        EnergyKind::M => (h.powi(3) * (3.0 * a1 + n.powi(3) * a2), scaled),
        EnergyKind::I => (h * h * (2.0 * a1 + n * n * a2), k * h * h * (a1 + a2) + scaled),
        EnergyKind::U => (h * a1, k * h * (a1 + a2) + scaled),
    };
    Ok(UpperBound {
        bulk,
        corners,
        total: bulk + corners,
    })
}

//! Truncated energies by tensor-product panel quadrature.
//!
//! * `M`: `∫∫∫ κ^p(x, y, z)` over triples
//! * `I`: `∫∫ κ_i^p(x, y)` over pairs
//! * `U`: `∫ κ_G^p(x)` over single points
//!
//! Outer variables range over the truncated polygon; the inner suprema of
//! `κ_i` and `κ_G` range over the full polygon. The integration domain is the
//! full ordered product, evaluated as a sum over sorted panel tuples with the
//! appropriate multiplicity. Per-tuple contributions are collected in
//! lexicographic order and reduced by pairwise summation.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{collinear, kappa_sq_coords, Polygon};
use crate::mesh::{build_graded_mesh, NodeSet, PanelMesh, QuadratureSpec, TruncationSpec};
use crate::parallel::{install, pairwise_sum};
use crate::sup::SupEngine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnergyKind {
    M,
    I,
    U,
}

impl EnergyKind {
    /// Number of integration variables.
    pub fn arity(self) -> usize {
        match self {
            EnergyKind::M => 3,
            EnergyKind::I => 2,
            EnergyKind::U => 1,
        }
    }

    /// Exponent at and above which the energy of a polygon with a corner is
    /// infinite.
    pub fn threshold(self) -> f64 {
        self.arity() as f64
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EnergyKind::M => "M",
            EnergyKind::I => "I",
            EnergyKind::U => "U",
        }
    }
}

impl std::fmt::Display for EnergyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EnergyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(EnergyKind::M),
            "I" | "i" => Ok(EnergyKind::I),
            "U" | "u" => Ok(EnergyKind::U),
            other => Err(Error::InvalidArgument(format!("unknown energy kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub kind: EnergyKind,
    pub p: f64,
    pub delta: f64,
    pub value: f64,
    /// `|E_g − E_⌈g/2⌉|` on the same mesh (for Monte Carlo: the standard
    /// error).
    pub error_est: f64,
    pub nodes: usize,
    /// Wall time in seconds.
    pub seconds: Option<f64>,
}

// ---------------------------------------------------------------------------
// powers of κ given κ²

trait Power: Sync {
    fn of_sq(&self, k2: f64) -> f64;
    fn of(&self, k: f64) -> f64;
}

struct Linear;
struct Square;
struct General(f64);

impl Power for Linear {
    #[inline(always)]
    fn of_sq(&self, k2: f64) -> f64 {
        k2.sqrt()
    }
    #[inline(always)]
    fn of(&self, k: f64) -> f64 {
        k
    }
}

impl Power for Square {
    #[inline(always)]
    fn of_sq(&self, k2: f64) -> f64 {
        k2
    }
    #[inline(always)]
    fn of(&self, k: f64) -> f64 {
        k * k
    }
}

impl Power for General {
    #[inline(always)]
    fn of_sq(&self, k2: f64) -> f64 {
        if k2 == 0.0 {
            0.0
        } else {
            k2.powf(0.5 * self.0)
        }
    }
    #[inline(always)]
    fn of(&self, k: f64) -> f64 {
        if k == 0.0 {
            0.0
        } else {
            k.powf(self.0)
        }
    }
}

// ---------------------------------------------------------------------------
// engine

enum Table {
    /// `κ` is evaluated on the fly.
    None,
    /// `κ_i` blocks for panel pairs `a ≤ b`, row-major `g × g`.
    Pairs { offsets: Vec<usize>, data: Vec<f64> },
    /// `κ_G` per node.
    Singles(Vec<f64>),
}

/// A discretized energy with its `p`-independent kernel data.
///
/// Panels carry a level; [`Engine::level_sums`] returns the contribution of
/// tuples whose largest panel level equals each level, which lets one mesh
/// serve a whole family of truncations.
pub(crate) struct Engine {
    kind: EnergyKind,
    nodes: NodeSet,
    g: usize,
    npanels: usize,
    level: Vec<usize>,
    nlevels: usize,
    line: Vec<usize>,
    /// Edge and unit tangent of each panel.
    edge: Vec<usize>,
    tangent: Vec<f64>,
    degenerate: bool,
    table: Table,
}

impl Engine {
    pub fn new(
        poly: &Polygon,
        kind: EnergyKind,
        mesh: &PanelMesh,
        order: usize,
        level: Vec<usize>,
        tol: f64,
    ) -> Engine {
        let nodes = NodeSet::build(poly, mesh, order);
        let edge_line = poly.edge_line_ids();
        let line: Vec<usize> = mesh.panels.iter().map(|p| edge_line[p.edge]).collect();
        let edge: Vec<usize> = mesh.panels.iter().map(|p| p.edge).collect();
        let segs = poly.segments();
        let tangent: Vec<f64> = edge
            .iter()
            .flat_map(|&e| {
                let len = segs[e].len;
                segs[e].d.iter().map(move |v| v / len)
            })
            .collect();
        let degenerate = edge_line.iter().all(|&l| l == edge_line[0]);
        let nlevels = level.iter().copied().max().unwrap_or(0) + 1;
        let npanels = mesh.panels.len();
        let mut engine = Engine {
            kind,
            nodes,
            g: order,
            npanels,
            level,
            nlevels,
            line,
            edge,
            tangent,
            degenerate,
            table: Table::None,
        };
        if !degenerate {
            engine.table = match kind {
                EnergyKind::M => Table::None,
                EnergyKind::I => engine.build_pairs(poly, tol),
                EnergyKind::U => engine.build_singles(poly, tol),
            };
        }
        engine
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn build_singles(&self, poly: &Polygon, tol: f64) -> Table {
        let sup = SupEngine::new(poly);
        let n = self.nodes.len();
        let vals: Vec<f64> = install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let x = self.nodes.point(i);
                    let on = sup.membership(x);
                    sup.kappa_g_with(x, &on, tol).0
                })
                .collect()
        });
        Table::Singles(vals)
    }

    fn build_pairs(&self, poly: &Polygon, tol: f64) -> Table {
        let sup = SupEngine::new(poly);
        let g = self.g;
        let n = self.nodes.len();
        let members: Vec<Vec<bool>> = (0..n).map(|i| sup.membership(self.nodes.point(i))).collect();
        let pairs: Vec<(usize, usize)> = (0..self.npanels)
            .flat_map(|a| (a..self.npanels).map(move |b| (a, b)))
            .collect();
        let blocks: Vec<Vec<f64>> = install(|| {
            pairs
                .par_iter()
                .map(|&(a, b)| {
                    let mut block = vec![0.0; g * g];
                    if a == b {
                        // coincident nodes: the limit along the edge
                        for li in 0..g {
                            block[li * g + li] = sup.kappa_i_tangent(self.nodes.point(a * g + li), self.edge[a], tol);
                        }
                    }
                    for li in 0..g {
                        let i = a * g + li;
                        let start = if a == b { li + 1 } else { 0 };
                        for lj in start..g {
                            let j = b * g + lj;
                            let v = sup
                                .kappa_i_with(
                                    self.nodes.point(i),
                                    self.nodes.point(j),
                                    &members[i],
                                    &members[j],
                                    tol,
                                )
                                .0;
                            block[li * g + lj] = v;
                            if a == b {
                                block[lj * g + li] = v;
                            }
                        }
                    }
                    block
                })
                .collect()
        });
        let mut offsets = Vec::with_capacity(self.npanels + 1);
        let mut row = 0;
        for a in 0..self.npanels {
            offsets.push(row);
            row += (self.npanels - a) * g * g;
        }
        offsets.push(row);
        Table::Pairs {
            offsets,
            data: blocks.concat(),
        }
    }

    /// Contribution per level for exponent `p`.
    pub fn level_sums(&self, p: f64) -> Vec<f64> {
        if self.degenerate {
            return vec![0.0; self.nlevels];
        }
        if p == 1.0 {
            self.level_sums_with(&Linear)
        } else if p == 2.0 {
            self.level_sums_with(&Square)
        } else {
            self.level_sums_with(&General(p))
        }
    }

    /// Energy over every panel.
    pub fn total(&self, p: f64) -> f64 {
        pairwise_sum(&self.level_sums(p))
    }

    fn level_sums_with<P: Power>(&self, pow: &P) -> Vec<f64> {
        let rows: Vec<Vec<f64>> = install(|| {
            (0..self.npanels)
                .into_par_iter()
                .map(|a| match self.kind {
                    EnergyKind::M => self.row_m(a, pow),
                    EnergyKind::I => self.row_i(a, pow),
                    EnergyKind::U => self.row_u(a, pow),
                })
                .collect()
        });
        (0..self.nlevels)
            .map(|l| {
                let col: Vec<f64> = rows.iter().map(|r| r[l]).collect();
                pairwise_sum(&col)
            })
            .collect()
    }

    fn reduce(&self, buckets: Vec<Vec<f64>>) -> Vec<f64> {
        buckets.iter().map(|b| pairwise_sum(b)).collect()
    }

    fn row_u<P: Power>(&self, a: usize, pow: &P) -> Vec<f64> {
        let mut out = vec![0.0; self.nlevels];
        if let Table::Singles(vals) = &self.table {
            let g = self.g;
            let s: f64 = (a * g..(a + 1) * g)
                .map(|i| self.nodes.weights[i] * pow.of(vals[i]))
                .sum();
            out[self.level[a]] = s;
        }
        out
    }

    fn row_i<P: Power>(&self, a: usize, pow: &P) -> Vec<f64> {
        let mut buckets = vec![Vec::new(); self.nlevels];
        if let Table::Pairs { offsets, data } = &self.table {
            let g = self.g;
            let w = &self.nodes.weights;
            for b in a..self.npanels {
                let base = offsets[a] + (b - a) * g * g;
                let block = &data[base..base + g * g];
                let mut s = 0.0;
                for li in 0..g {
                    let mut inner = 0.0;
                    for lj in 0..g {
                        inner += w[b * g + lj] * pow.of(block[li * g + lj]);
                    }
                    s += w[a * g + li] * inner;
                }
                let mult = if a == b { 1.0 } else { 2.0 };
                buckets[self.level[a].max(self.level[b])].push(mult * s);
            }
        }
        self.reduce(buckets)
    }

    fn row_m<P: Power>(&self, a: usize, pow: &P) -> Vec<f64> {
        let mut buckets = vec![Vec::new(); self.nlevels];
        for b in a..self.npanels {
            for c in b..self.npanels {
                if self.line[a] == self.line[b] && self.line[b] == self.line[c] {
                    continue;
                }
                let mult = if a == b && b == c {
                    1.0
                } else if a == b || b == c {
                    3.0
                } else {
                    6.0
                };
                let mut s = if self.nodes.dim == 2 {
                    self.block_m2(a, b, c, pow)
                } else {
                    self.block_m(a, b, c, pow)
                };
                if a == b {
                    s += self.diagonal_m(a, c, pow);
                }
                if b == c {
                    s += self.diagonal_m(b, a, pow);
                }
                let l = self.level[a].max(self.level[b]).max(self.level[c]);
                buckets[l].push(mult * s);
            }
        }
        self.reduce(buckets)
    }

    fn block_m2<P: Power>(&self, a: usize, b: usize, c: usize, pow: &P) -> f64 {
        let g = self.g;
        let pts = &self.nodes.coords;
        let w = &self.nodes.weights;
        let zs = &pts[2 * c * g..2 * (c + 1) * g];
        let wz = &w[c * g..(c + 1) * g];
        let mut total = 0.0;
        for i in a * g..(a + 1) * g {
            let (x0, x1) = (pts[2 * i], pts[2 * i + 1]);
            let mut si = 0.0;
            for j in b * g..(b + 1) * g {
                let (y0, y1) = (pts[2 * j], pts[2 * j + 1]);
                let (ux, uy) = (y0 - x0, y1 - x1);
                let uu = ux * ux + uy * uy;
                let mut sj = 0.0;
                for (z, &wk) in zs.chunks_exact(2).zip(wz) {
                    let (vx, vy) = (z[0] - x0, z[1] - x1);
                    let (qx, qy) = (z[0] - y0, z[1] - y1);
                    let vv = vx * vx + vy * vy;
                    let ww = qx * qx + qy * qy;
                    let cr = ux * vy - uy * vx;
                    let c2 = cr * cr;
                    if collinear(uu, vv, ww, c2) {
                        continue;
                    }
                    sj += wk * pow.of_sq(4.0 * c2 / (uu * vv * ww));
                }
                si += w[j] * sj;
            }
            total += w[i] * si;
        }
        total
    }

    /// Contribution of coincident node pairs in panel `a` with the third
    /// point in panel `c`. The kernel is 0 there by convention but its limit
    /// along the edge is `2·dist(z, L)/|x − z|²`, and the diagonal carries
    /// weight of order `h`.
    fn diagonal_m<P: Power>(&self, a: usize, c: usize, pow: &P) -> f64 {
        let g = self.g;
        let dim = self.nodes.dim;
        let w = &self.nodes.weights;
        let t = &self.tangent[a * dim..(a + 1) * dim];
        let mut total = 0.0;
        for i in a * g..(a + 1) * g {
            let x = self.nodes.point(i);
            let mut si = 0.0;
            for k in c * g..(c + 1) * g {
                let z = self.nodes.point(k);
                let mut vv = 0.0;
                let mut tv = 0.0;
                for d in 0..dim {
                    let v = z[d] - x[d];
                    vv += v * v;
                    tv += t[d] * v;
                }
                let cross2 = if dim == 2 {
                    let c = t[0] * (z[1] - x[1]) - t[1] * (z[0] - x[0]);
                    c * c
                } else {
                    (vv - tv * tv).max(0.0)
                };
                if vv == 0.0 || cross2 <= 1e-28 * vv {
                    continue;
                }
                si += w[k] * pow.of_sq(4.0 * cross2 / (vv * vv));
            }
            total += w[i] * w[i] * si;
        }
        total
    }

    fn block_m<P: Power>(&self, a: usize, b: usize, c: usize, pow: &P) -> f64 {
        let g = self.g;
        let w = &self.nodes.weights;
        let mut total = 0.0;
        for i in a * g..(a + 1) * g {
            let x = self.nodes.point(i);
            let mut si = 0.0;
            for j in b * g..(b + 1) * g {
                let y = self.nodes.point(j);
                let mut sj = 0.0;
                for k in c * g..(c + 1) * g {
                    sj += w[k] * pow.of_sq(kappa_sq_coords(x, y, self.nodes.point(k)));
                }
                si += w[j] * sj;
            }
            total += w[i] * si;
        }
        total
    }
}

/// Level of each panel for the truncations `δ₀·2⁻ᵏ`, `k = 0..=levels`: the
/// smallest `k` whose truncation keeps the panel.
pub(crate) fn panel_levels(mesh: &PanelMesh, delta0: f64, levels: usize) -> Vec<usize> {
    mesh.panels
        .iter()
        .map(|p| {
            let mut d = delta0;
            for k in 0..=levels {
                if d <= p.corner_dist {
                    return k;
                }
                d *= 0.5;
            }
            levels
        })
        .collect()
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("exponent p must be positive, got {p}")))
    }
}

/// Truncated energy by graded panel quadrature.
pub fn energy(
    poly: &Polygon,
    kind: EnergyKind,
    p: f64,
    trunc: &TruncationSpec,
    spec: &QuadratureSpec,
) -> Result<EnergyReport> {
    if !poly.is_validated() {
        return Err(Error::Unvalidated);
    }
    check_exponent(p)?;
    let start = Instant::now();
    let mesh = build_graded_mesh(poly, trunc, spec)?;
    let flat = vec![0; mesh.panels.len()];
    let fine = Engine::new(poly, kind, &mesh, spec.order, flat.clone(), spec.rel_tol);
    let value = fine.total(p);
    let coarse = Engine::new(poly, kind, &mesh, spec.order.div_ceil(2), flat, spec.rel_tol);
    let error_est = (value - coarse.total(p)).abs();
    Ok(EnergyReport {
        kind,
        p,
        delta: trunc.delta,
        value,
        error_est,
        nodes: fine.node_count(),
        seconds: Some(start.elapsed().as_secs_f64()),
    })
}

/// `𝓤_p^δ(E_{π/2}) = 2∫_δ¹ (2/t)^p dt`.
pub fn u_energy_closed_form_right_angle(p: f64, delta: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("δ must lie in (0, 1), got {delta}")));
    }
    if p == 1.0 {
        Ok(4.0 * (1.0 / delta).ln())
    } else {
        Ok(2.0 * 2f64.powf(p) * (1.0 - delta.powf(1.0 - p)) / (1.0 - p))
    }
}

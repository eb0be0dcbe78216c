//! Ambient geometry: points, polygons, the model corners `E_φ`, and the
//! Menger curvature kernel.
//!
//! The kernel `κ(x, y, z)` is the reciprocal circumradius of three points and
//! vanishes on collinear or coincident triples. Internally everything runs on
//! coordinate slices so the quadrature loops never allocate; the [`Point`]
//! and [`PointTriple`] wrappers are the validated public surface.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative area threshold below which a triple counts as collinear.
const COLLINEAR_RTOL: f64 = 1e-14;

/// Relative distance tolerance for intersection tests in dimension > 2.
const INTERSECT_RTOL: f64 = 1e-12;

/// A point in ℝⁿ, n ≥ 2, with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    /// Planar point. Panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        Self::new(vec![x, y]).expect("finite planar coordinates")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn distance(&self, other: &Point) -> f64 {
        norm2(&sub(&self.coords, &other.coords)).sqrt()
    }

    /// Uniform scaling about the origin.
    pub fn scaled(&self, factor: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

/// Argument of the curvature kernel: three points of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointTriple {
    pub x: Point,
    pub y: Point,
    pub z: Point,
}

impl PointTriple {
    pub fn new(x: Point, y: Point, z: Point) -> Result<Self> {
        for p in [&y, &z] {
            if p.dim() != x.dim() {
                return Err(Error::DimensionMismatch {
                    expected: x.dim(),
                    got: p.dim(),
                });
            }
        }
        Ok(Self { x, y, z })
    }

    pub fn planar(x: (f64, f64), y: (f64, f64), z: (f64, f64)) -> Self {
        Self {
            x: Point::xy(x.0, x.1),
            y: Point::xy(y.0, y.1),
            z: Point::xy(z.0, z.1),
        }
    }
}

// ---------------------------------------------------------------------------
// slice arithmetic

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Squared norm of the wedge product `u ∧ v`, i.e. `(2·area)²` of the
/// triangle spanned by `u` and `v`.
pub(crate) fn wedge2(u: &[f64], v: &[f64]) -> f64 {
    if u.len() == 2 {
        let c = u[0] * v[1] - u[1] * v[0];
        return c * c;
    }
    let mut acc = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let c = u[i] * v[j] - u[j] * v[i];
            acc += c * c;
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// curvature kernel

#[inline]
pub(crate) fn collinear(uu: f64, vv: f64, ww: f64, twice_area_sq: f64) -> bool {
    if uu == 0.0 || vv == 0.0 || ww == 0.0 {
        return true;
    }
    let dmax = uu.max(vv).max(ww);
    let tol = COLLINEAR_RTOL * dmax;
    0.25 * twice_area_sq <= tol * tol
}

/// Squared Menger curvature `κ²` of three coordinate slices.
///
/// Zero for coincident or collinear points.
#[inline]
pub fn kappa_sq_coords(x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    if x.len() == 2 {
        let (ux, uy) = (y[0] - x[0], y[1] - x[1]);
        let (vx, vy) = (z[0] - x[0], z[1] - x[1]);
        let (wx, wy) = (z[0] - y[0], z[1] - y[1]);
        let uu = ux * ux + uy * uy;
        let vv = vx * vx + vy * vy;
        let ww = wx * wx + wy * wy;
        let c = ux * vy - uy * vx;
        let c2 = c * c;
        if collinear(uu, vv, ww, c2) {
            return 0.0;
        }
        return 4.0 * c2 / (uu * vv * ww);
    }
    let u = sub(y, x);
    let v = sub(z, x);
    let w = sub(z, y);
    let (uu, vv, ww) = (norm2(&u), norm2(&v), norm2(&w));
    let c2 = wedge2(&u, &v);
    if collinear(uu, vv, ww, c2) {
        return 0.0;
    }
    4.0 * c2 / (uu * vv * ww)
}

/// Menger curvature of three coordinate slices (no argument reordering).
#[inline]
pub fn kappa_coords(x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    kappa_sq_coords(x, y, z).sqrt()
}

fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    for (p, q) in a.coords.iter().zip(&b.coords) {
        match p.total_cmp(q) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn canonical(t: &PointTriple) -> [&Point; 3] {
    let mut pts = [&t.x, &t.y, &t.z];
    pts.sort_by(|a, b| lex_cmp(a, b));
    pts
}

/// Menger curvature `κ = 1/r`; zero when the points are collinear or two
/// coincide.
///
/// The arguments are put into lexicographic order first, so the result is
/// bit-identical under every permutation.
pub fn kappa(t: &PointTriple) -> f64 {
    let [a, b, c] = canonical(t);
    kappa_coords(&a.coords, &b.coords, &c.coords)
}

/// Circumradius of three points, `+∞` for collinear or coincident points.
pub fn circumradius(t: &PointTriple) -> f64 {
    let k = kappa(t);
    if k == 0.0 {
        f64::INFINITY
    } else {
        1.0 / k
    }
}

/// Distance from `z` to the infinite line through `x` and `y`.
pub fn dist_point_line(z: &Point, x: &Point, y: &Point) -> Result<f64> {
    let d = sub(&y.coords, &x.coords);
    let dd = norm2(&d);
    if dd == 0.0 {
        return Err(Error::DegenerateLine);
    }
    Ok(dist_to_line(&z.coords, &x.coords, &d))
}

pub(crate) fn dist_to_line(p: &[f64], a: &[f64], d: &[f64]) -> f64 {
    let r = sub(p, a);
    (wedge2(&r, d) / norm2(d)).sqrt()
}

// ---------------------------------------------------------------------------
// segments

/// Precomputed segment `a + s·d`, `s ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub(crate) struct Segment {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    pub len2: f64,
    pub len: f64,
}

impl Segment {
    pub fn new(a: &[f64], b: &[f64]) -> Self {
        let d = sub(b, a);
        let len2 = norm2(&d);
        Self {
            a: a.to_vec(),
            b: b.to_vec(),
            d,
            len2,
            len: len2.sqrt(),
        }
    }

    pub fn at(&self, s: f64) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.d)
            .map(|(a, d)| a + s * d)
            .collect()
    }

    /// Writes `a + s·d` into `out`.
    #[inline]
    pub fn at_into(&self, s: f64, out: &mut [f64]) {
        for ((o, a), d) in out.iter_mut().zip(&self.a).zip(&self.d) {
            *o = a + s * d;
        }
    }

    pub fn closest_param(&self, p: &[f64]) -> f64 {
        let r = sub(p, &self.a);
        (dot(&r, &self.d) / self.len2).clamp(0.0, 1.0)
    }

    pub fn closest_point(&self, p: &[f64]) -> Vec<f64> {
        self.at(self.closest_param(p))
    }

    pub fn dist(&self, p: &[f64]) -> f64 {
        norm2(&sub(p, &self.closest_point(p))).sqrt()
    }

    pub fn dist_to_line(&self, p: &[f64]) -> f64 {
        dist_to_line(p, &self.a, &self.d)
    }
}

/// Euclidean distance between two closed segments.
pub(crate) fn segment_distance(s1: &Segment, s2: &Segment) -> f64 {
    // Closest points of two segments, clamped parametrisation.
    let r = sub(&s1.a, &s2.a);
    let a = s1.len2;
    let e = s2.len2;
    let f = dot(&s2.d, &r);
    let (s, t);
    if a == 0.0 && e == 0.0 {
        return norm2(&r).sqrt();
    }
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = dot(&s1.d, &r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = dot(&s1.d, &s2.d);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let p = s1.at(s);
    let q = s2.at(t);
    // the clamped solution can miss an endpoint pairing in parallel cases
    let candidates = [
        norm2(&sub(&p, &q)),
        norm2(&sub(&s1.a, &s2.closest_point(&s1.a))),
        norm2(&sub(&s1.b, &s2.closest_point(&s1.b))),
        norm2(&sub(&s2.a, &s1.closest_point(&s2.a))),
        norm2(&sub(&s2.b, &s1.closest_point(&s2.b))),
    ];
    candidates.iter().copied().fold(f64::INFINITY, f64::min).sqrt()
}

// ---------------------------------------------------------------------------
// polygons

/// Ordered vertex list, open or closed.
///
/// A polygon built with [`Polygon::new`] is unvalidated; [`validate_polygon`]
/// checks simplicity and marks it validated. Every numerical routine requires
/// a validated polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    closed: bool,
    validated: bool,
}

/// Angle at a vertex, radians in `(0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerAngle {
    pub vertex: usize,
    pub angle: f64,
}

impl Polygon {
    /// Builds an unvalidated polygon. Checks vertex count and dimensions only.
    pub fn new(vertices: Vec<Point>, closed: bool) -> Result<Self> {
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(Error::TooFewVertices {
                min,
                got: vertices.len(),
            });
        }
        let dim = vertices[0].dim();
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        Ok(Self {
            vertices,
            closed,
            validated: false,
        })
    }

    /// Convenience constructor for planar input; validates.
    pub fn from_xy(vertices: &[(f64, f64)], closed: bool) -> Result<Self> {
        let pts = vertices
            .iter()
            .map(|&(x, y)| Point::new(vec![x, y]))
            .collect::<Result<Vec<_>>>()?;
        validate_polygon(Polygon::new(pts, closed)?)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoint vertex indices of edge `i`.
    pub fn edge_vertices(&self, i: usize) -> (usize, usize) {
        (i, (i + 1) % self.vertices.len())
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let (a, b) = self.edge_vertices(i);
        self.vertices[a].distance(&self.vertices[b])
    }

    /// Total arc length `ℋ¹(P)`.
    pub fn length(&self) -> f64 {
        (0..self.edge_count()).map(|i| self.edge_length(i)).sum()
    }

    pub fn shortest_edge(&self) -> f64 {
        (0..self.edge_count())
            .map(|i| self.edge_length(i))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    /// Uniformly scaled copy; keeps the validation flag.
    pub fn scaled(&self, factor: f64) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|v| v.scaled(factor)).collect(),
            closed: self.closed,
            validated: self.validated,
        }
    }

    pub(crate) fn segments(&self) -> Vec<Segment> {
        (0..self.edge_count())
            .map(|i| {
                let (a, b) = self.edge_vertices(i);
                Segment::new(&self.vertices[a].coords, &self.vertices[b].coords)
            })
            .collect()
    }

    /// Edge indices meeting at vertex `i`: `(incoming, outgoing)`.
    fn vertex_edges(&self, i: usize) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        if self.closed {
            Some(((i + n - 1) % n, i))
        } else if i == 0 || i + 1 == n {
            None
        } else {
            Some((i - 1, i))
        }
    }

    /// Whether vertex `i` is an interior vertex with angle exactly π.
    pub fn is_straight(&self, i: usize) -> bool {
        if self.vertex_edges(i).is_none() {
            return false;
        }
        let n = self.vertices.len();
        let prev = &self.vertices[(i + n - 1) % n].coords;
        let cur = &self.vertices[i].coords;
        let next = &self.vertices[(i + 1) % n].coords;
        if self.dim() == 2 {
            orient(prev, cur, next) == 0.0 && !reverses(prev, cur, next)
        } else {
            let e1 = sub(prev, cur);
            let e2 = sub(next, cur);
            let tol = INTERSECT_RTOL * INTERSECT_RTOL * norm2(&e1) * norm2(&e2);
            wedge2(&e1, &e2) <= tol && dot(&e1, &e2) < 0.0
        }
    }

    /// Groups edges by supporting line: edges with equal ids are collinear.
    pub(crate) fn edge_line_ids(&self) -> Vec<usize> {
        let segs = self.segments();
        let tol = INTERSECT_RTOL * self.diameter();
        let on_line = |s: &Segment, q: &[f64]| {
            if self.dim() == 2 {
                orient(&s.a, &s.b, q) == 0.0
            } else {
                s.dist_to_line(q) <= tol
            }
        };
        let mut ids: Vec<usize> = Vec::with_capacity(segs.len());
        let mut reps: Vec<usize> = Vec::new();
        for (j, s) in segs.iter().enumerate() {
            let found = reps
                .iter()
                .position(|&r| on_line(&segs[r], &s.a) && on_line(&segs[r], &s.b));
            match found {
                Some(id) => ids.push(id),
                None => {
                    ids.push(reps.len());
                    reps.push(j);
                }
            }
        }
        ids
    }

    /// Vertices carrying a genuine corner: interior vertices (every vertex of
    /// a closed polygon) whose angle differs from π.
    pub fn corner_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.vertex_edges(i).is_some() && !self.is_straight(i))
            .collect()
    }

    /// Angles at every corner vertex.
    pub fn corner_angles(&self) -> Vec<CornerAngle> {
        self.corner_vertices()
            .into_iter()
            .map(|i| CornerAngle {
                vertex: i,
                angle: vertex_angle(self, i).expect("corner vertices are interior"),
            })
            .collect()
    }

    /// Cumulative arc length at each vertex, starting at 0.
    fn cumulative_lengths(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.edge_count() + 1);
        acc.push(0.0);
        let mut s = 0.0;
        for i in 0..self.edge_count() {
            s += self.edge_length(i);
            acc.push(s);
        }
        acc
    }

    /// Distance from `p` to the polygon.
    pub fn distance_to(&self, p: &Point) -> f64 {
        self.segments()
            .iter()
            .map(|s| s.dist(&p.coords))
            .fold(f64::INFINITY, f64::min)
    }

    fn signed_area_2d(&self) -> f64 {
        let n = self.vertices.len();
        let mut a = 0.0;
        for i in 0..n {
            let p = &self.vertices[i].coords;
            let q = &self.vertices[(i + 1) % n].coords;
            a += p[0] * q[1] - p[1] * q[0];
        }
        0.5 * a
    }

    pub fn from_json_str(text: &str) -> Result<Polygon> {
        let file: PolygonFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))?;
        file.into_polygon()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&PolygonFile::from(self)).expect("polygon serializes")
    }
}

/// On-disk polygon schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonFile {
    pub format_version: u32,
    pub closed: bool,
    pub vertices: Vec<Vec<f64>>,
}

impl PolygonFile {
    pub fn into_polygon(self) -> Result<Polygon> {
        if self.format_version != 1 {
            return Err(Error::MalformedJson(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let pts = self
            .vertices
            .into_iter()
            .map(Point::new)
            .collect::<Result<Vec<_>>>()?;
        validate_polygon(Polygon::new(pts, self.closed)?)
    }
}

impl From<&Polygon> for PolygonFile {
    fn from(p: &Polygon) -> Self {
        PolygonFile {
            format_version: 1,
            closed: p.closed,
            vertices: p.vertices.iter().map(|v| v.coords.clone()).collect(),
        }
    }
}

fn orient(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    )
}

/// For collinear `a, b, c`: whether `c` lies on the ray from `b` through `a`,
/// i.e. the path folds back on itself at `b`. Exact.
fn reverses(a: &[f64], b: &[f64], c: &[f64]) -> bool {
    let k = (0..a.len())
        .max_by(|&i, &j| (a[i] - b[i]).abs().total_cmp(&(a[j] - b[j]).abs()))
        .unwrap_or(0);
    let da = a[k] - b[k];
    let dc = c[k] - b[k];
    da != 0.0 && dc != 0.0 && (da > 0.0) == (dc > 0.0)
}

fn on_segment_collinear(p: &[f64], q: &[f64], r: &[f64]) -> bool {
    // r collinear with pq; inside the bounding box means on the segment
    (0..2).all(|k| r[k] >= p[k].min(q[k]) && r[k] <= p[k].max(q[k]))
}

fn segments_intersect_2d(p1: &[f64], p2: &[f64], q1: &[f64], q2: &[f64]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let straddle = |a: f64, b: f64| (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0);
    if straddle(d1, d2) && straddle(d3, d4) {
        return true;
    }
    (d1 == 0.0 && on_segment_collinear(q1, q2, p1))
        || (d2 == 0.0 && on_segment_collinear(q1, q2, p2))
        || (d3 == 0.0 && on_segment_collinear(p1, p2, q1))
        || (d4 == 0.0 && on_segment_collinear(p1, p2, q2))
}

fn edges_adjacent(p: &Polygon, i: usize, j: usize) -> bool {
    let m = p.edge_count();
    let (i, j) = (i.min(j), i.max(j));
    j == i + 1 || (p.closed && i == 0 && j == m - 1)
}

/// Checks simplicity and marks the polygon validated.
///
/// Planar input uses exact orientation predicates; higher dimensions use a
/// segment-distance test with tolerance `1e-12 · diameter`.
pub fn validate_polygon(mut poly: Polygon) -> Result<Polygon> {
    let min = if poly.closed { 3 } else { 2 };
    if poly.vertices.len() < min {
        return Err(Error::TooFewVertices {
            min,
            got: poly.vertices.len(),
        });
    }
    let m = poly.edge_count();
    for i in 0..m {
        let (a, b) = poly.edge_vertices(i);
        if poly.vertices[a] == poly.vertices[b] {
            return Err(Error::ZeroLengthEdge { edge: i });
        }
    }
    let planar = poly.dim() == 2;
    let segs = poly.segments();
    let tol = INTERSECT_RTOL * poly.diameter();
    for i in 0..m {
        for j in i + 1..m {
            let hit = if edges_adjacent(&poly, i, j) {
                // shared vertex is allowed; folding back onto the other edge is not
                let (shared, before, after) = if poly.edge_vertices(i).1 == poly.edge_vertices(j).0
                {
                    let s = poly.edge_vertices(i).1;
                    (s, poly.edge_vertices(i).0, poly.edge_vertices(j).1)
                } else {
                    let s = poly.edge_vertices(j).1;
                    (s, poly.edge_vertices(j).0, poly.edge_vertices(i).1)
                };
                let (a, b, c) = (
                    &poly.vertices[before].coords,
                    &poly.vertices[shared].coords,
                    &poly.vertices[after].coords,
                );
                if planar {
                    orient(a, b, c) == 0.0 && reverses(a, b, c)
                } else {
                    let e1 = sub(a, b);
                    let e2 = sub(c, b);
                    wedge2(&e1, &e2) <= INTERSECT_RTOL * INTERSECT_RTOL * norm2(&e1) * norm2(&e2)
                        && dot(&e1, &e2) > 0.0
                }
            } else if planar {
                segments_intersect_2d(&segs[i].a, &segs[i].b, &segs[j].a, &segs[j].b)
            } else {
                segment_distance(&segs[i], &segs[j]) <= tol
            };
            if hit {
                return Err(Error::SelfIntersection {
                    first: i,
                    second: j,
                });
            }
        }
    }
    poly.validated = true;
    Ok(poly)
}

/// Angle at vertex `i`, in `(0, 2π)`.
///
/// Open polylines measure counter-clockwise from the incoming to the outgoing
/// edge direction (so the middle vertex of `E_φ` has angle `φ`); closed planar
/// polygons report the interior angle; higher dimensions report the unsigned
/// angle in `(0, π]`.
pub fn vertex_angle(p: &Polygon, i: usize) -> Result<f64> {
    let n = p.vertices.len();
    if i >= n {
        return Err(Error::VertexOutOfRange { index: i, count: n });
    }
    if p.vertex_edges(i).is_none() {
        return Err(Error::EndpointVertex(i));
    }
    let cur = &p.vertices[i].coords;
    let e1 = sub(&p.vertices[(i + n - 1) % n].coords, cur);
    let e2 = sub(&p.vertices[(i + 1) % n].coords, cur);
    if p.dim() != 2 {
        return Ok(wedge2(&e1, &e2).sqrt().atan2(dot(&e1, &e2)));
    }
    let ccw = (e1[0] * e2[1] - e1[1] * e2[0]).atan2(dot(&e1, &e2));
    let ccw = if ccw < 0.0 { ccw + TAU } else { ccw };
    if p.closed && p.signed_area_2d() > 0.0 {
        Ok(TAU - ccw)
    } else {
        Ok(ccw)
    }
}

/// Point at arc length `s` along the vertex order.
///
/// Closed polygons wrap `s` modulo the total length; open polygons reject
/// `s` outside `[0, length]`.
pub fn arc_point(p: &Polygon, s: f64) -> Result<Point> {
    let total = p.length();
    let s = if p.closed {
        s.rem_euclid(total)
    } else if (0.0..=total).contains(&s) {
        s
    } else {
        return Err(Error::ArcLengthOutOfRange { s, length: total });
    };
    let cum = p.cumulative_lengths();
    let m = p.edge_count();
    let mut e = cum.partition_point(|&c| c <= s).saturating_sub(1);
    if e >= m {
        e = m - 1;
    }
    let len = cum[e + 1] - cum[e];
    let (a, b) = p.edge_vertices(e);
    let seg = Segment::new(&p.vertices[a].coords, &p.vertices[b].coords);
    let t = ((s - cum[e]) / len).clamp(0.0, 1.0);
    Point::new(seg.at(t))
}

/// Unit direction at angle `phi`, exact on multiples of π/2.
pub(crate) fn unit_direction(phi: f64) -> (f64, f64) {
    if phi == FRAC_PI_2 {
        (0.0, 1.0)
    } else if phi == PI {
        (-1.0, 0.0)
    } else if phi == 3.0 * FRAC_PI_2 {
        (0.0, -1.0)
    } else {
        (phi.cos(), phi.sin())
    }
}

/// The model corner `E_φ`: two unit edges meeting at the origin with opening
/// angle `φ`, as the open polyline `(1,0) → (0,0) → (cos φ, sin φ)`.
pub fn make_e_phi(phi: f64) -> Result<Polygon> {
    if !(phi > 0.0 && phi < TAU) {
        return Err(Error::InvalidArgument(format!(
            "corner angle {phi} outside (0, 2π)"
        )));
    }
    let (c, s) = unit_direction(phi);
    Polygon::from_xy(&[(1.0, 0.0), (0.0, 0.0), (c, s)], false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square() -> Polygon {
        Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true).unwrap()
    }

    #[test]
    fn circumradius_examples() {
        let right = PointTriple::planar((0.0, 0.0), (1.0, 0.0), (0.0, 1.0));
        assert_relative_eq!(circumradius(&right), 0.5f64.sqrt(), max_relative = 1e-15);
        let line = PointTriple::planar((0.0, 0.0), (1.0, 0.0), (2.0, 0.0));
        assert!(circumradius(&line).is_infinite());
        let h = 3f64.sqrt() / 2.0;
        let equi = PointTriple::planar((0.0, 0.0), (1.0, 0.0), (0.5, h));
        assert_relative_eq!(circumradius(&equi), 1.0 / 3f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn kappa_examples() {
        let right = PointTriple::planar((0.0, 0.0), (1.0, 0.0), (0.0, 1.0));
        assert_relative_eq!(kappa(&right), 2f64.sqrt(), max_relative = 1e-15);
        let coincident = PointTriple::planar((0.3, 0.1), (0.3, 0.1), (2.0, 5.0));
        assert_eq!(kappa(&coincident), 0.0);
        let doubled = PointTriple::planar((0.0, 0.0), (2.0, 0.0), (0.0, 2.0));
        assert_eq!(kappa(&doubled), kappa(&right) / 2.0);
    }

    #[test]
    fn kappa_matches_distance_formula() {
        let t = PointTriple::planar((0.2, -0.3), (1.7, 0.4), (0.5, 2.2));
        let d = dist_point_line(&t.z, &t.x, &t.y).unwrap();
        let expected = 2.0 * d / (t.x.distance(&t.z) * t.y.distance(&t.z));
        assert_relative_eq!(kappa(&t), expected, max_relative = 1e-14);
    }

    #[test]
    fn kappa_in_three_dimensions() {
        let a = Point::new(vec![0.0, 0.0, 0.0]).unwrap();
        let b = Point::new(vec![0.0, 1.0, 0.0]).unwrap();
        let c = Point::new(vec![0.0, 0.0, 1.0]).unwrap();
        let t = PointTriple::new(a, b, c).unwrap();
        assert_relative_eq!(kappa(&t), 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn triple_dimension_mismatch() {
        let a = Point::new(vec![0.0, 0.0, 0.0]).unwrap();
        let r = PointTriple::new(a, Point::xy(1.0, 0.0), Point::xy(0.0, 1.0));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dist_point_line_examples() {
        let d = |z: (f64, f64), x: (f64, f64), y: (f64, f64)| {
            dist_point_line(&Point::xy(z.0, z.1), &Point::xy(x.0, x.1), &Point::xy(y.0, y.1))
        };
        assert_eq!(d((0.0, 1.0), (0.0, 0.0), (1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(d((0.5, 0.0), (0.0, 0.0), (1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(d((3.0, 5.0), (0.0, 0.0), (0.0, 2.0)).unwrap(), 3.0);
        assert!(matches!(
            d((3.0, 5.0), (1.0, 1.0), (1.0, 1.0)),
            Err(Error::DegenerateLine)
        ));
    }

    #[test]
    fn e_phi_construction() {
        let e = make_e_phi(FRAC_PI_2).unwrap();
        let v: Vec<_> = e.vertices().iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(v, vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]);
        assert!(!e.is_closed());
        assert!(e.is_validated());

        let e3 = make_e_phi(PI / 3.0).unwrap();
        let z = e3.vertices()[2].coords();
        assert_relative_eq!(z[0], 0.5, max_relative = 1e-15);
        assert_relative_eq!(z[1], 3f64.sqrt() / 2.0, max_relative = 1e-15);

        let straight = make_e_phi(PI).unwrap();
        assert!(straight.corner_vertices().is_empty());
        let t = PointTriple::new(
            arc_point(&straight, 0.3).unwrap(),
            arc_point(&straight, 1.1).unwrap(),
            arc_point(&straight, 1.9).unwrap(),
        )
        .unwrap();
        assert_eq!(kappa(&t), 0.0);

        for bad in [0.0, TAU, -1.0, 7.0] {
            assert!(make_e_phi(bad).is_err());
        }
    }

    #[test]
    fn validation_examples() {
        assert!(square().is_validated());
        let bowtie = Polygon::from_xy(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)], true);
        assert!(matches!(
            bowtie,
            Err(Error::SelfIntersection {
                first: 0,
                second: 2
            })
        ));
        let repeated = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 1.0)], false);
        assert!(matches!(repeated, Err(Error::ZeroLengthEdge { edge: 1 })));
        let single = Polygon::new(vec![Point::xy(0.0, 0.0)], false);
        assert!(matches!(single, Err(Error::TooFewVertices { .. })));
    }

    #[test]
    fn validation_rejects_fold_back_and_touching() {
        let fold = Polygon::from_xy(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0)], false);
        assert!(matches!(fold, Err(Error::SelfIntersection { .. })));
        // vertex 3 touches edge 0 in its interior
        let touch = Polygon::from_xy(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 0.0)], false);
        assert!(matches!(touch, Err(Error::SelfIntersection { first: 0, second: 2 })));
        let degenerate_triangle = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], true);
        assert!(degenerate_triangle.is_err());
    }

    #[test]
    fn validation_in_three_dimensions() {
        let pts = |v: &[[f64; 3]]| {
            v.iter()
                .map(|c| Point::new(c.to_vec()).unwrap())
                .collect::<Vec<_>>()
        };
        // skew quadrilateral: simple
        let ok = Polygon::new(
            pts(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 0.0]]),
            true,
        )
        .unwrap();
        assert!(validate_polygon(ok).is_ok());
        let crossing = Polygon::new(
            pts(&[[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
            true,
        )
        .unwrap();
        assert!(matches!(
            validate_polygon(crossing),
            Err(Error::SelfIntersection { first: 0, second: 2 })
        ));
    }

    #[test]
    fn vertex_angles() {
        let sq = square();
        for i in 0..4 {
            assert_relative_eq!(vertex_angle(&sq, i).unwrap(), FRAC_PI_2, max_relative = 1e-15);
        }
        // clockwise orientation gives the same interior angles
        let cw = Polygon::from_xy(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)], true).unwrap();
        assert_relative_eq!(vertex_angle(&cw, 2).unwrap(), FRAC_PI_2, max_relative = 1e-15);

        for phi in [0.3, FRAC_PI_2, 2.0, 4.0, 5.9] {
            let e = make_e_phi(phi).unwrap();
            assert_relative_eq!(vertex_angle(&e, 1).unwrap(), phi, max_relative = 1e-14);
        }
        let line = Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], false).unwrap();
        assert_eq!(vertex_angle(&line, 1).unwrap(), PI);
        assert!(line.is_straight(1));
        assert!(matches!(vertex_angle(&line, 0), Err(Error::EndpointVertex(0))));
        assert!(matches!(vertex_angle(&line, 2), Err(Error::EndpointVertex(2))));

        let l_hex = Polygon::from_xy(
            &[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)],
            true,
        )
        .unwrap();
        assert_relative_eq!(vertex_angle(&l_hex, 3).unwrap(), 3.0 * FRAC_PI_2, max_relative = 1e-15);
    }

    #[test]
    fn arc_points() {
        let sq = square();
        assert_eq!(arc_point(&sq, 0.0).unwrap(), Point::xy(0.0, 0.0));
        assert_eq!(arc_point(&sq, 0.5).unwrap(), Point::xy(0.5, 0.0));
        assert_eq!(arc_point(&sq, 4.0).unwrap(), Point::xy(0.0, 0.0));
        assert_eq!(arc_point(&sq, 2.5).unwrap(), Point::xy(0.5, 1.0));
        let e = make_e_phi(FRAC_PI_2).unwrap();
        assert_eq!(arc_point(&e, 2.0).unwrap(), Point::xy(0.0, 1.0));
        assert!(matches!(
            arc_point(&e, 2.5),
            Err(Error::ArcLengthOutOfRange { .. })
        ));
        assert!(arc_point(&e, -0.1).is_err());
    }

    #[test]
    fn segment_distances() {
        let s1 = Segment::new(&[0.0, 0.0], &[1.0, 0.0]);
        let s2 = Segment::new(&[0.0, 0.5], &[1.0, 0.5]);
        assert_eq!(segment_distance(&s1, &s2), 0.5);
        let s3 = Segment::new(&[2.0, 1.0], &[3.0, 5.0]);
        assert_relative_eq!(segment_distance(&s1, &s3), 2f64.sqrt(), max_relative = 1e-15);
        let s4 = Segment::new(&[0.5, -1.0], &[0.5, 1.0]);
        assert_eq!(segment_distance(&s1, &s4), 0.0);
    }

    #[test]
    fn json_round_trip() {
        let sq = square();
        let text = sq.to_json_string();
        assert_eq!(Polygon::from_json_str(&text).unwrap(), sq);
        assert!(matches!(
            Polygon::from_json_str("{\"format_version\":1,\"closed\":true,"),
            Err(Error::MalformedJson(_))
        ));
        assert!(matches!(
            Polygon::from_json_str("{\"format_version\":2,\"closed\":true,\"vertices\":[[0,0],[1,0],[0,1]]}"),
            Err(Error::MalformedJson(_))
        ));
    }
}

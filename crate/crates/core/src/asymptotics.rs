//! Dyadic truncation series, divergence classification and critical
//! exponents.
//!
//! A series evaluates `E(δ_k)` for `δ_k = δ₀·2⁻ᵏ`, `k = 0..=K`, from a single
//! mesh graded at ratio 2 down to `δ_K`: every truncation radius is a panel
//! boundary, so `E(δ_k)` is a partial sum of per-level contributions and the
//! series is nondecreasing by construction.
//!
//! Near a corner the energy density is homogeneous, so increments behave like
//! `Δ_k ≈ C·2^{(p−d)k}` with `d` the arity. The slope of `log₂ Δ_k` against
//! `k` is therefore `p − d` and separates the three regimes.

use std::io::{Read, Write};

use serde::Serialize;

use crate::energy::{check_exponent, panel_levels, EnergyKind, Engine};
use crate::error::{Error, Result};
use crate::geom::Polygon;
use crate::mesh::{build_graded_mesh, QuadratureSpec, TruncationSpec};

/// Slope band (per halving) treated as logarithmic growth.
pub const LOG_BAND: f64 = 0.1;
/// Default number of halvings.
pub const DEFAULT_LEVELS: usize = 10;
/// Bisection bracket and iteration count for critical exponents.
pub const CRITICAL_BRACKET: (f64, f64) = (0.1, 5.0);
pub const CRITICAL_ITERATIONS: usize = 12;
/// Panel order used for critical exponents unless asked otherwise: the
/// slope is insensitive to it and the triple energy costs `g³` per panel
/// triple.
pub const CRITICAL_ORDER: usize = 8;

impl QuadratureSpec {
    /// Default spec with the panel order lowered to [`CRITICAL_ORDER`].
    pub fn for_critical_p() -> Self {
        Self {
            order: CRITICAL_ORDER,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicSeries {
    pub delta0: f64,
    /// Number of halvings `K`.
    pub levels: usize,
    /// `δ_k`, `k = 0..=K`.
    pub deltas: Vec<f64>,
    /// `E(δ_k)`.
    pub values: Vec<f64>,
    /// `Δ_k = E(δ_{k+1}) − E(δ_k)`, `k = 0..K`.
    pub increments: Vec<f64>,
    /// `Δ_{k+1}/Δ_k` (`NaN` where `Δ_k = 0`).
    pub ratios: Vec<f64>,
}

impl DyadicSeries {
    /// Builds the derived columns from `δ₀` and the values.
    pub fn from_values(delta0: f64, values: Vec<f64>) -> Self {
        let levels = values.len().saturating_sub(1);
        let deltas = (0..values.len())
            .map(|k| delta0 * 0.5f64.powi(k as i32))
            .collect();
        let increments: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let ratios = increments
            .windows(2)
            .map(|w| if w[0] == 0.0 { f64::NAN } else { w[1] / w[0] })
            .collect();
        Self {
            delta0,
            levels,
            deltas,
            values,
            increments,
            ratios,
        }
    }

    /// `log₂` of the last `n` increment ratios.
    pub fn log2_ratios(&self, n: usize) -> Vec<f64> {
        let r = &self.ratios;
        r[r.len().saturating_sub(n)..].iter().map(|x| x.log2()).collect()
    }

    /// CSV with header `k,delta,value,increment,ratio`. Row `k` carries
    /// `E(δ_k) − E(δ_{k−1})` and the ratio of that to the previous increment;
    /// undefined cells are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["k", "delta", "value", "increment", "ratio"]).map_err(io)?;
        for k in 0..self.values.len() {
            let inc = if k >= 1 { format!("{:e}", self.increments[k - 1]) } else { String::new() };
            let ratio = if k >= 2 && self.ratios[k - 2].is_finite() {
                format!("{:e}", self.ratios[k - 2])
            } else {
                String::new()
            };
            w.write_record([
                k.to_string(),
                format!("{:e}", self.deltas[k]),
                format!("{:e}", self.values[k]),
                inc,
                ratio,
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a series written by [`DyadicSeries::write_csv`]; only the `k`,
    /// `delta` and `value` columns are used.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let bad = |m: String| Error::MalformedSeries(m);
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers().map_err(|e| bad(e.to_string()))?.clone();
        let expected = ["k", "delta", "value", "increment", "ratio"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(bad(format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>())));
        }
        let mut delta0 = f64::NAN;
        let mut values = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| bad(format!("row {row}: missing column {i}")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("row {row}: {e}")))
            };
            let k = field(0)?;
            if k != row as f64 {
                return Err(bad(format!("row {row}: expected k = {row}, got {k}")));
            }
            if row == 0 {
                delta0 = field(1)?;
            }
            values.push(field(2)?);
        }
        if values.is_empty() {
            return Err(bad("no rows".into()));
        }
        Ok(Self::from_values(delta0, values))
    }
}

/// Outcome of the slope fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", content = "value", rename_all = "snake_case")]
pub enum DivergenceClass {
    /// Converges; carries the extrapolated limit.
    Finite(f64),
    /// Grows linearly in the number of halvings; carries the increment per
    /// halving.
    LogDivergent(f64),
    /// Grows like `δ^{−γ}`; carries `γ`.
    PowerDivergent(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub class: DivergenceClass,
    /// Least-squares slope of `log₂ Δ_k` per halving.
    pub fit_slope: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, rms)
}

/// Fitted slope over the last `⌈K/2⌉` increments, `−∞` when they vanish.
fn tail_slope(s: &DyadicSeries) -> Result<(f64, f64)> {
    let k = s.levels;
    if k < 4 {
        return Err(Error::InvalidArgument(format!(
            "classification needs at least 4 halvings, got {k}"
        )));
    }
    let scale = s.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (i, &d) in s.increments.iter().enumerate() {
        if d < -1e-12 * scale {
            return Err(Error::NonMonotone(i + 1));
        }
    }
    let m = k.div_ceil(2);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (k - m..k)
        .filter(|&i| s.increments[i] > 0.0)
        .map(|i| (i as f64, s.increments[i].log2()))
        .unzip();
    if xs.len() < 2 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    Ok(fit_line(&xs, &ys))
}

/// Classifies the `δ → 0` behaviour of a series with `K ≥ 4`.
pub fn classify_divergence(s: &DyadicSeries) -> Result<Classification> {
    let (slope, residual) = tail_slope(s)?;
    let last_value = *s.values.last().unwrap();
    let last_inc = *s.increments.last().unwrap();
    let class = if slope < -LOG_BAND {
        let r = slope.exp2();
        DivergenceClass::Finite(last_value + last_inc * r / (1.0 - r))
    } else if slope <= LOG_BAND {
        DivergenceClass::LogDivergent(last_inc)
    } else {
        DivergenceClass::PowerDivergent(slope)
    };
    Ok(Classification {
        class,
        fit_slope: slope,
        residual,
    })
}

/// Discretized series for one polygon and kind, reusable across exponents.
pub struct SeriesModel {
    kind: EnergyKind,
    delta0: f64,
    levels: usize,
    engine: Engine,
}

impl SeriesModel {
    /// Meshes `P` once at `δ₀·2⁻ᴷ` with ratio 2 (the ratio in `spec` is
    /// ignored).
    pub fn new(poly: &Polygon, kind: EnergyKind, delta0: f64, levels: usize, spec: &QuadratureSpec) -> Result<Self> {
        if !poly.is_validated() {
            return Err(Error::Unvalidated);
        }
        TruncationSpec::new(delta0).validate(poly)?;
        let fine = TruncationSpec::new(delta0 * 0.5f64.powi(levels as i32));
        let mesh_spec = QuadratureSpec {
            ratio: 2.0,
            depth: spec.depth + levels,
            ..*spec
        };
        let mesh = build_graded_mesh(poly, &fine, &mesh_spec)?;
        let level = panel_levels(&mesh, delta0, levels);
        let engine = Engine::new(poly, kind, &mesh, spec.order, level, spec.rel_tol);
        Ok(Self {
            kind,
            delta0,
            levels,
            engine,
        })
    }

    pub fn kind(&self) -> EnergyKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.engine.node_count()
    }

    pub fn series(&self, p: f64) -> Result<DyadicSeries> {
        check_exponent(p)?;
        let mut buckets = self.engine.level_sums(p);
        buckets.resize(self.levels + 1, 0.0);
        let mut acc = 0.0;
        let values = buckets
            .iter()
            .map(|b| {
                acc += b;
                acc
            })
            .collect();
        Ok(DyadicSeries::from_values(self.delta0, values))
    }
}

/// `E(δ₀·2⁻ᵏ)` for `k = 0..=K`.
pub fn dyadic_series(
    poly: &Polygon,
    kind: EnergyKind,
    p: f64,
    delta0: f64,
    levels: usize,
    spec: &QuadratureSpec,
) -> Result<DyadicSeries> {
    SeriesModel::new(poly, kind, delta0, levels, spec)?.series(p)
}

/// Bisection record of a critical-exponent search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalEstimate {
    pub kind: EnergyKind,
    pub p: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub delta0: f64,
    pub levels: usize,
    /// `(p, fitted slope)` at each bisection midpoint.
    pub trace: Vec<(f64, f64)>,
}

/// Default starting truncation: a sixteenth of the shortest edge.
pub fn default_delta0(poly: &Polygon) -> f64 {
    poly.shortest_edge() / 16.0
}

/// Critical exponent by bisection on the sign of the fitted slope, which is
/// `p − d` in the asymptotic regime.
pub fn estimate_critical_p(poly: &Polygon, kind: EnergyKind, spec: &QuadratureSpec) -> Result<f64> {
    Ok(estimate_critical_p_with(poly, kind, spec, default_delta0(poly), DEFAULT_LEVELS)?.p)
}

pub fn estimate_critical_p_with(
    poly: &Polygon,
    kind: EnergyKind,
    spec: &QuadratureSpec,
    delta0: f64,
    levels: usize,
) -> Result<CriticalEstimate> {
    if !poly.is_validated() {
        return Err(Error::Unvalidated);
    }
    if poly.corner_vertices().is_empty() {
        return Err(Error::NoCorner);
    }
    let model = SeriesModel::new(poly, kind, delta0, levels, spec)?;
    let (mut lo, mut hi) = CRITICAL_BRACKET;
    let mut trace = Vec::with_capacity(CRITICAL_ITERATIONS);
    for _ in 0..CRITICAL_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let (slope, _) = tail_slope(&model.series(mid)?)?;
        trace.push((mid, slope));
        if slope < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalEstimate {
        kind,
        p: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations: CRITICAL_ITERATIONS,
        delta0,
        levels,
        trace,
    })
}

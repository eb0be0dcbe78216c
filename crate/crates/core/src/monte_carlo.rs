//! Monte Carlo estimates of the truncated energies.
//!
//! Points are drawn uniformly in arc length from the truncated polygon. The
//! stream is split into fixed-size chunks, each with its own ChaCha stream,
//! and chunk statistics are merged in chunk order, so the output depends only
//! on `(seed, samples)`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::energy::{check_exponent, EnergyKind, EnergyReport};
use crate::error::{Error, Result};
use crate::geom::{kappa_sq_coords, Polygon, Segment};
use crate::mesh::{corner_flags, TruncationSpec};
use crate::parallel::install;
use crate::sup::SupEngine;

const CHUNK: usize = 4096;
const SUP_TOL: f64 = 1e-12;

/// The truncated domain as arc-length intervals.
struct Domain {
    pieces: Vec<(usize, f64, f64)>,
    cumulative: Vec<f64>,
    segs: Vec<Segment>,
}

impl Domain {
    fn new(p: &Polygon, trunc: &TruncationSpec) -> Self {
        let corners = corner_flags(p);
        let mut pieces = Vec::new();
        let mut cumulative = vec![0.0];
        for e in 0..p.edge_count() {
            let (a, b) = p.edge_vertices(e);
            let len = p.edge_length(e);
            let s = if corners[a] { trunc.delta } else { 0.0 };
            let t = if corners[b] { len - trunc.delta } else { len };
            pieces.push((e, s, t));
            let last = *cumulative.last().unwrap();
            cumulative.push(last + (t - s));
        }
        Self {
            pieces,
            cumulative,
            segs: p.segments(),
        }
    }

    fn measure(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    fn sample(&self, u: f64, out: &mut [f64]) {
        let target = u * self.measure();
        let i = self
            .cumulative
            .partition_point(|&c| c <= target)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        let (e, s, _) = self.pieces[i];
        let arc = s + (target - self.cumulative[i]);
        let seg = &self.segs[e];
        seg.at_into(arc / seg.len, out);
    }
}

/// Running mean and second moment, merged in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Unbiased Monte Carlo estimate of the truncated energy. `error_est` holds
/// the standard error.
pub fn mc_energy(
    poly: &Polygon,
    kind: EnergyKind,
    p: f64,
    trunc: &TruncationSpec,
    samples: usize,
    seed: u64,
) -> Result<EnergyReport> {
    if !poly.is_validated() {
        return Err(Error::Unvalidated);
    }
    check_exponent(p)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    trunc.validate(poly)?;
    let start = Instant::now();
    let domain = Domain::new(poly, trunc);
    let sup = SupEngine::new(poly);
    let dim = poly.dim();
    let arity = kind.arity();
    let degenerate = {
        let ids = poly.edge_line_ids();
        ids.iter().all(|&l| l == ids[0])
    };
    let chunks = samples.div_ceil(CHUNK);
    let stats: Vec<Moments> = install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let count = CHUNK.min(samples - c * CHUNK);
                let mut pts = vec![0.0; arity * dim];
                let mut m = Moments::default();
                for _ in 0..count {
                    for k in 0..arity {
                        domain.sample(rng.random::<f64>(), &mut pts[k * dim..(k + 1) * dim]);
                    }
                    let v = if degenerate {
                        0.0
                    } else {
                        let x = &pts[..dim];
                        let k = match kind {
                            EnergyKind::M => kappa_sq_coords(x, &pts[dim..2 * dim], &pts[2 * dim..]).sqrt(),
                            EnergyKind::I => sup.kappa_i_value(x, &pts[dim..], SUP_TOL),
                            EnergyKind::U => sup.kappa_g_value(x, SUP_TOL),
                        };
                        if k == 0.0 {
                            0.0
                        } else {
                            k.powf(p)
                        }
                    };
                    m.push(v);
                }
                m
            })
            .collect()
    });
    let total = stats.into_iter().fold(Moments::default(), Moments::merge);
    let vol = domain.measure().powi(arity as i32);
    let var = if total.n > 1.0 { total.m2 / (total.n - 1.0) } else { 0.0 };
    Ok(EnergyReport {
        kind,
        p,
        delta: trunc.delta,
        value: vol * total.mean,
        error_est: vol * (var / total.n).sqrt(),
        nodes: samples,
        seconds: Some(start.elapsed().as_secs_f64()),
    })
}

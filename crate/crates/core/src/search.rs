//! One-dimensional maximization on `[0, 1]`: a coarse grid, graded toward a
//! few anchor parameters, followed by golden-section refinement of the best
//! local maxima.

/// Uniform samples on `[0, 1]`, endpoints included.
pub(crate) const UNIFORM_SAMPLES: usize = 64;
/// Golden-section iterations per bracket.
pub(crate) const MAX_GOLDEN_ITERS: usize = 60;
/// Local maxima refined per search.
pub(crate) const MAX_BRACKETS: usize = 4;
/// Deepest geometric level around an anchor.
const MAX_LEVELS: i32 = 52;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Maximum {
    pub value: f64,
    pub arg: f64,
    pub converged: bool,
}

/// Sample parameters: the uniform grid plus points `a ± 2⁻ᵏ` around each
/// anchor `a`, down to `min_scale`.
pub(crate) fn sample_grid(anchors: &[f64], min_scale: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (0..UNIFORM_SAMPLES)
        .map(|i| i as f64 / (UNIFORM_SAMPLES - 1) as f64)
        .collect();
    let floor = min_scale.max(f64::EPSILON * 0.25);
    for &a in anchors {
        let a = a.clamp(0.0, 1.0);
        out.push(a);
        let mut h = 0.5;
        let mut k = 1;
        while h >= floor && k <= MAX_LEVELS {
            if a - h > 0.0 {
                out.push(a - h);
            }
            if a + h < 1.0 {
                out.push(a + h);
            }
            h *= 0.5;
            k += 1;
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn golden<F: FnMut(f64) -> f64>(f: &mut F, mut a: f64, mut b: f64, tol: f64) -> Maximum {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut last_change = f64::INFINITY;
    let mut prev = fc.max(fd);
    for _ in 0..MAX_GOLDEN_ITERS {
        if b - a <= 1e-15 {
            last_change = 0.0;
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        let cur = fc.max(fd);
        last_change = (cur - prev).abs();
        prev = cur;
    }
    let (value, arg) = if fc >= fd { (fc, c) } else { (fd, d) };
    Maximum {
        value,
        arg,
        converged: last_change < tol,
    }
}

/// Maximizes a nonnegative `f` over `[0, 1]`. An all-zero grid is taken to
/// mean `f ≡ 0`.
///
/// `tol` is the convergence threshold on successive golden-section values.
pub(crate) fn maximize<F: FnMut(f64) -> f64>(
    mut f: F,
    anchors: &[f64],
    min_scale: f64,
    tol: f64,
) -> Maximum {
    let params = sample_grid(anchors, min_scale);
    let vals: Vec<f64> = params.iter().map(|&s| f(s)).collect();
    let n = params.len();
    let (mut imax, mut vmax) = (0, vals[0]);
    for (i, &v) in vals.iter().enumerate() {
        if v > vmax {
            imax = i;
            vmax = v;
        }
    }
    let mut best = Maximum {
        value: vmax,
        arg: params[imax],
        converged: true,
    };
    if vmax <= 0.0 {
        return best;
    }
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            (i == 0 || vals[i] >= vals[i - 1])
                && (i + 1 == n || vals[i] >= vals[i + 1])
                && vals[i] >= 0.25 * vmax
        })
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    peaks.truncate(MAX_BRACKETS);
    for &i in &peaks {
        let lo = params[i.saturating_sub(1)];
        let hi = params[(i + 1).min(n - 1)];
        let m = golden(&mut f, lo, hi, tol);
        if m.value > best.value {
            best.value = m.value;
            best.arg = m.arg;
        }
        best.converged &= m.converged;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_contains_anchors_and_endpoints() {
        let g = sample_grid(&[0.3], 1e-6);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.contains(&0.3));
        assert!(g.iter().any(|&s| (s - 0.3).abs() < 2e-6 && s != 0.3));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn finds_smooth_maximum() {
        let m = maximize(|s| 1.0 - (s - 0.377).powi(2), &[], 1.0, 1e-14);
        assert!((m.arg - 0.377).abs() < 1e-6);
    }

    #[test]
    fn finds_narrow_peak_near_anchor() {
        let c = 1e-5;
        let f = |s: f64| 1.0 / ((s - c).powi(2) + 1e-12);
        let m = maximize(f, &[0.0], 1e-7, 1e-9);
        assert!((m.arg - c).abs() < 1e-8, "arg {}", m.arg);
    }

    #[test]
    fn bimodal_takes_higher_peak() {
        let f = |s: f64| (-(s - 0.2f64).powi(2) * 400.0).exp() + 1.5 * (-(s - 0.8f64).powi(2) * 400.0).exp();
        let m = maximize(f, &[], 1.0, 1e-12);
        assert!((m.arg - 0.8).abs() < 1e-6);
        assert!((m.value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn endpoint_maximum() {
        let m = maximize(|s| 1.0 - s, &[], 1.0, 1e-12);
        assert_eq!(m.arg, 0.0);
        assert_eq!(m.value, 1.0);
    }
}

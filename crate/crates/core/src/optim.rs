//! Deterministic one-dimensional root finding and maximization.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Root of `f` in `[lo, hi]` by the Illinois variant of regula falsi,
/// falling back to bisection whenever the secant step stalls.
pub fn bracketed_root(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let width = b - a;
        if width <= xtol {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) || !x.is_finite() {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        // Guarantee geometric shrinking even when one endpoint sticks.
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fb.signum() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            side = 0;
        }
    }
    Ok(0.5 * (a + b))
}

/// All sign changes of `f` on a uniform grid of `samples` points over
/// `[lo, hi]`, each refined with [`bracketed_root`].
pub fn scan_roots(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, samples: usize, xtol: f64) -> Vec<f64> {
    let samples = samples.max(2);
    let xs: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..samples - 1 {
        if ys[i] == 0.0 {
            roots.push(xs[i]);
        } else if ys[i].is_finite() && ys[i + 1].is_finite() && ys[i].signum() != ys[i + 1].signum() && ys[i + 1] != 0.0 {
            if let Ok(r) = bracketed_root(&mut f, xs[i], xs[i + 1], xtol) {
                roots.push(r);
            }
        }
    }
    if ys[samples - 1] == 0.0 {
        roots.push(xs[samples - 1]);
    }
    roots
}

/// Maximizer of a unimodal `f` on `[lo, hi]` by golden-section search.
/// Returns `(argmax, max)`.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > xtol {
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
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, p| if p.1 > best.1 { p } else { best })
}

/// Result of [`grid_golden_max`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScanMaximum {
    pub argmax: f64,
    pub value: f64,
    /// The best grid point sat on the scan boundary, so the true maximum may
    /// lie outside the range.
    pub at_edge: bool,
    pub grid: Vec<(f64, f64)>,
}

/// Uniform grid scan followed by golden-section refinement in the cell pair
/// around the best grid point.
pub fn grid_golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, samples: usize, xtol: f64) -> ScanMaximum {
    let samples = samples.max(3);
    let step = (hi - lo) / (samples - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let x = lo + step * i as f64;
            (x, f(x))
        })
        .collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &(_, y))| if y > acc.1 { (i, y) } else { acc });
    let at_edge = best == 0 || best == samples - 1;
    let a = grid[best.saturating_sub(1)].0;
    let b = grid[(best + 1).min(samples - 1)].0;
    let (mut x, mut y) = golden_section_max(&mut f, a, b, xtol);
    if grid[best].1 > y {
        (x, y) = grid[best];
    }
    ScanMaximum {
        argmax: x,
        value: y,
        at_edge,
        grid,
    }
}

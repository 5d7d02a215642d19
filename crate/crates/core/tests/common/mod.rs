//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use randop_core::{GaussianBump, TargetFunction};

/// Adaptive Simpson on `[a, b]`, first split at every breakpoint and into
/// `pieces` equal panels so narrow bumps cannot slip between samples.
pub fn integrate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    pieces: usize,
    tol: f64,
) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut nodes: Vec<f64> = (0..=pieces)
        .map(|i| a + (b - a) * i as f64 / pieces as f64)
        .collect();
    nodes.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let panel_tol = tol / (nodes.len() as f64);
    nodes
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson_step(f, lo, hi, flo, fmid, fhi, whole, panel_tol, 50)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Composite Simpson weights on `n` (odd) equally spaced nodes over `[a, b]`.
pub fn simpson_grid(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 3 && n % 2 == 1);
    let h = (b - a) / (n - 1) as f64;
    let nodes = (0..n).map(|i| a + h * i as f64).collect();
    let weights = (0..n)
        .map(|i| {
            let c = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    (nodes, weights)
}

/// Least-squares distance from `f` to the span of `atoms` in `L²([a, b])`,
/// with both sides sampled on an `n`-point Simpson grid and solved through
/// an SVD of the weighted sample matrix. Singular values below
/// `rel_cutoff · σ₁` are discarded.
pub fn grid_distance(
    atoms: &[GaussianBump],
    f: &TargetFunction,
    a: f64,
    b: f64,
    n: usize,
    rel_cutoff: f64,
) -> f64 {
    let (nodes, weights) = simpson_grid(a, b, n);
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let rhs = DVector::from_iterator(n, nodes.iter().zip(&sw).map(|(&x, s)| s * f.eval(x)));
    if atoms.is_empty() {
        return rhs.norm();
    }
    let design = DMatrix::from_fn(n, atoms.len(), |i, j| sw[i] * atoms[j].eval(nodes[i]));
    let svd = design.clone().svd(true, true);
    let floor = rel_cutoff * svd.singular_values.max();
    let u = svd.u.as_ref().expect("left vectors");
    let mut projected = DVector::zeros(n);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > floor {
            let col = u.column(k);
            projected += col * col.dot(&rhs);
        }
    }
    (rhs - projected).norm()
}

/// `sqrt(∫_a^b f²)` on the same Simpson grid as [`grid_distance`].
pub fn grid_norm(f: &TargetFunction, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = simpson_grid(a, b, n);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&x, w)| w * f.eval(x).powi(2))
        .sum::<f64>()
        .sqrt()
}

//! Symmetric eigensolver and the spectral functionals of the restricted
//! operator: operator norm, nuclear norm, Kolmogorov widths, the tail bound
//! on widths, and the Gaussian-squared decay fit.
//!
//! For a compact positive operator the n-th Kolmogorov width of the image
//! of the unit ball is its (n+1)-th eigenvalue, so `d_n = μ_{n+1}` here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{self, projected_norm_sq, RestrictedOperator, DEFAULT_TAIL_TOL};
use crate::pointproc::{self, PointConfiguration, Window};

/// Jacobi stops once the off-diagonal Frobenius norm is below this
/// fraction of the matrix norm.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative asymmetry accepted by [`eigen_sym`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Eigen-decomposition of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    /// `‖V Λ Vᵀ - M‖_F`.
    pub fn reconstruction_error(&self, m: &Matrix) -> f64 {
        let n = m.dim();
        let mut err = 0.0;
        for i in 0..n {
            for j in 0..n {
                let r: f64 = self
                    .values
                    .iter()
                    .zip(&self.vectors)
                    .map(|(l, v)| l * v[i] * v[j])
                    .sum();
                err += (r - m[(i, j)]).powi(2);
            }
        }
        err.sqrt()
    }

    /// `‖VᵀV - I‖_F`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err = 0.0;
        for (a, va) in self.vectors.iter().enumerate() {
            for (b, vb) in self.vectors.iter().enumerate() {
                let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                err += (dot - target).powi(2);
            }
        }
        err.sqrt()
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix.
pub fn eigen_sym(m: &Matrix) -> Result<Eigen> {
    let (values, vt) = jacobi(m, true)?;
    let vt = vt.expect("vectors requested");
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let eig = Eigen {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: order.iter().map(|&k| vt.row(k).to_vec()).collect(),
    };
    debug_assert!(
        eig.reconstruction_error(m) <= 1e-10 * m.frobenius_norm().max(f64::MIN_POSITIVE),
        "eigen reconstruction"
    );
    debug_assert!(
        eig.orthonormality_error() <= 1e-10,
        "eigenvector orthonormality"
    );
    Ok(eig)
}

/// Eigenvalues only, descending. Same iteration as [`eigen_sym`] without
/// accumulating rotations.
pub fn eigenvalues_sym(m: &Matrix) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(m, false)?;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Cyclic Jacobi. Returns unsorted eigenvalues and, if asked, `Vᵀ`
/// (eigenvectors as rows).
fn jacobi(m: &Matrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Matrix>)> {
    let n = m.dim();
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix passed to eigensolver".into()));
    }
    let (gap, row, col) = m.asymmetry();
    if gap > SYMMETRY_TOLERANCE * m.max_abs() {
        return Err(Error::NotSymmetric { row, col, gap });
    }
    let mut a = Matrix::from_fn(n, |i, j| if i <= j { m[(i, j)] } else { m[(j, i)] });
    let mut vt = want_vectors.then(|| Matrix::identity(n));

    let norm = a.frobenius_norm();
    let target = JACOBI_TOLERANCE * norm;
    // Skipping entries below target/n keeps the skipped mass under target.
    let skip = target / n.max(1) as f64;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= skip {
                    continue;
                }
                let (c, s, t) = rotation(a[(p, p)], a[(q, q)], apq);
                rotate(a.as_mut_slice(), n, p, q, c, s);
                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                if let Some(v) = vt.as_mut() {
                    rotate_rows(v.as_mut_slice(), n, p, q, c, s);
                }
            }
        }
    }
    Ok((a.diagonal(), vt))
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for (j, x) in a.row(i).iter().enumerate() {
            if j != i {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

/// Rotation `(cos, sin, tan)` annihilating `a_pq`.
#[inline]
fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64, f64) {
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, t)
}

/// Apply the rotation to rows/columns `p`, `q` of a symmetric row-major
/// matrix, leaving the 2x2 pivot block to the caller.
#[inline]
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[p * n + k];
        let akq = a[q * n + k];
        let np = c * akp - s * akq;
        let nq = s * akp + c * akq;
        a[p * n + k] = np;
        a[q * n + k] = nq;
        a[k * n + p] = np;
        a[k * n + q] = nq;
    }
}

#[inline]
fn rotate_rows(v: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = v.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (vp, vq) = (*x, *y);
        *x = c * vp - s * vq;
        *y = s * vp + c * vq;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub operator_norm: f64,
    pub nuclear_norm: f64,
    pub trace: f64,
    /// `d_n = max(μ_{n+1}, 0)`, one per eigenvalue.
    pub widths: Vec<f64>,
}

impl SpectralSummary {
    /// Summary from descending eigenvalues and the matrix trace.
    pub fn from_eigenvalues(eigenvalues: Vec<f64>, trace: f64) -> Self {
        let widths: Vec<f64> = eigenvalues.iter().map(|&m| m.max(0.0)).collect();
        SpectralSummary {
            operator_norm: widths.first().copied().unwrap_or(0.0),
            nuclear_norm: widths.iter().sum(),
            trace,
            widths,
            eigenvalues,
        }
    }

    pub fn rank(&self, rel_floor: f64) -> usize {
        let floor = rel_floor * self.operator_norm;
        self.eigenvalues.iter().filter(|&&m| m > floor).count()
    }

    /// `d_n`, zero beyond the rank.
    pub fn width(&self, n: usize) -> f64 {
        self.widths.get(n).copied().unwrap_or(0.0)
    }
}

/// Spectrum of `S = D^{1/2} G D^{1/2}`.
pub fn spectrum(op: &RestrictedOperator) -> Result<SpectralSummary> {
    let s = op.weighted();
    let eigenvalues = eigenvalues_sym(s)?;
    Ok(SpectralSummary::from_eigenvalues(eigenvalues, s.trace()))
}

/// `d_0, …, d_{n_max}`, padded with zeros past the rank.
pub fn widths(summary: &SpectralSummary, n_max: usize) -> Vec<f64> {
    (0..=n_max).map(|n| summary.width(n)).collect()
}

/// `N_x` and the tail sum bounding `d_{N_x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBound {
    pub n_x: usize,
    pub bound: f64,
}

/// `N_x = |Θ ∩ [-x, x)|` and `Σ w_θ ‖e_θ‖²` over contributors outside
/// `[-x, x)`; the widths satisfy `d_{N_x} ≤ bound`.
pub fn width_tail_bound(
    config: &PointConfiguration,
    variance: f64,
    interval: Window,
    x: f64,
) -> Result<TailBound> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tail bound needs x > 0, got {x}"
        )));
    }
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "variance must be positive and finite, got {variance}"
        )));
    }
    let inner = Window::symmetric(x)?;
    let n_x = pointproc::count_in(config, inner)?;
    let threshold = operator::contributor_threshold(variance, interval, DEFAULT_TAIL_TOL);
    let bound = config
        .iter()
        .filter(|&(theta, _)| !inner.contains(theta))
        .map(|(theta, w)| (w, projected_norm_sq(theta, variance, interval)))
        .filter(|&(_, norm)| operator::is_contributor(norm, threshold))
        .map(|(w, norm)| w * norm)
        .sum();
    Ok(TailBound { n_x, bound })
}

/// Which widths enter a [`DecayFit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    /// Smallest usable `d_n / d_0`.
    pub floor: f64,
    /// Largest usable `d_n / d_0`.
    pub cap: f64,
    /// Optional inclusive index range.
    pub n_range: Option<(usize, usize)>,
}

impl Default for FitWindow {
    fn default() -> Self {
        FitWindow {
            floor: 1e-12,
            cap: 1e-2,
            n_range: None,
        }
    }
}

/// Least-squares line through `y_n = sqrt(-ε ln d_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// First and last index used.
    pub n_range: (usize, usize),
    pub points: usize,
}

/// `sqrt(-ε ln d)`, or `None` where it is undefined.
pub fn decay_coordinate(d: f64, variance: f64) -> Option<f64> {
    if d > 0.0 && d < 1.0 && d.is_finite() {
        Some((-variance * d.ln()).sqrt())
    } else {
        None
    }
}

/// Decay fit over widths in `[1e-12, 1e-2] · d_0`.
pub fn decay_fit(widths: &[f64], variance: f64) -> Result<DecayFit> {
    decay_fit_with(widths, variance, &FitWindow::default())
}

pub fn decay_fit_with(widths: &[f64], variance: f64, window: &FitWindow) -> Result<DecayFit> {
    let top = widths.first().copied().unwrap_or(0.0);
    let (lo_n, hi_n) = window.n_range.unwrap_or((0, usize::MAX));
    let pts: Vec<(f64, f64)> = widths
        .iter()
        .enumerate()
        .filter(|&(n, _)| n >= lo_n && n <= hi_n)
        .filter(|&(_, &d)| d >= window.floor * top && d <= window.cap * top)
        .filter_map(|(n, &d)| decay_coordinate(d, variance).map(|y| (n as f64, y)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientWidths { found: pts.len() });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
        n_range: (pts[0].0 as usize, pts[pts.len() - 1].0 as usize),
        points: pts.len(),
    })
}

//! Finite-rank representation of the compressed operator
//! `Q A Q = Σ w_θ e_θ ⊗ e_θ`, where `e_θ` is the Gaussian shift
//! `p_ε(· - θ)` restricted to an interval `[a, b]`.
//!
//! The operator is stored through its Gram matrix `G[i][j] = ⟨e_θi, e_θj⟩`
//! and the symmetrically weighted `S = D^{1/2} G D^{1/2}`, whose spectrum is
//! the nonzero spectrum of the operator.

use crate::error::{Error, Result};
use crate::gaussians::{self, pdf, Atom, Domain, GaussianBump, TargetFunction};
use crate::matrix::Matrix;
use crate::pointproc::{PointConfiguration, Window};

/// Default relative cutoff below which a projected atom is dropped.
pub const DEFAULT_TAIL_TOL: f64 = 1e-30;

#[derive(Debug, Clone)]
pub struct RestrictedOperator {
    interval: Window,
    variance: f64,
    positions: Vec<f64>,
    weights: Vec<f64>,
    gram: Matrix,
    weighted: Matrix,
}

/// `‖Q p_ε(· - θ)‖²`, the squared norm of a shift restricted to `interval`.
pub fn projected_norm_sq(theta: f64, variance: f64, interval: Window) -> f64 {
    let sd = (0.5 * variance).sqrt();
    pdf(2.0 * variance, 0.0)
        * gaussians::normal_mass((interval.lo() - theta) / sd, (interval.hi() - theta) / sd)
}

/// Threshold on `‖e_θ‖²` for a point to be kept.
pub(crate) fn contributor_threshold(variance: f64, interval: Window, tail_tol: f64) -> f64 {
    tail_tol * pdf(2.0 * variance, 0.0) * interval.len()
}

pub(crate) fn is_contributor(norm_sq: f64, threshold: f64) -> bool {
    norm_sq > 0.0 && norm_sq >= threshold
}

fn check_variance(variance: f64) -> Result<()> {
    if variance.is_finite() && variance > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "variance must be positive and finite, got {variance}"
        )))
    }
}

/// Build the restricted operator for `config` on `interval`.
///
/// Points whose projected atom norm falls below
/// `tail_tol * p_{2ε}(0) * (b - a)` are dropped.
pub fn build_restricted(
    config: &PointConfiguration,
    variance: f64,
    interval: Window,
    tail_tol: f64,
) -> Result<RestrictedOperator> {
    check_variance(variance)?;
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail_tol must lie in (0, 1), got {tail_tol}"
        )));
    }
    let threshold = contributor_threshold(variance, interval, tail_tol);
    let (positions, weights): (Vec<f64>, Vec<f64>) = config
        .iter()
        .filter(|&(theta, _)| {
            is_contributor(projected_norm_sq(theta, variance, interval), threshold)
        })
        .unzip();
    Ok(RestrictedOperator::from_parts(
        interval, variance, positions, weights,
    ))
}

impl RestrictedOperator {
    fn from_parts(interval: Window, variance: f64, positions: Vec<f64>, weights: Vec<f64>) -> Self {
        let n = positions.len();
        let domain = Domain::Interval(interval);
        let atoms: Vec<Atom> = positions
            .iter()
            .map(|&t| GaussianBump::unit(t, variance).into())
            .collect();
        let mut gram = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let g = gaussians::inner(&atoms[i], &atoms[j], domain);
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        let root: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
        let weighted = Matrix::from_fn(n, |i, j| gram[(i, j)] * (root[i] * root[j]));
        RestrictedOperator {
            interval,
            variance,
            positions,
            weights,
            gram,
            weighted,
        }
    }

    /// The operator on a subset of contributors, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let root: Vec<f64> = indices.iter().map(|&i| self.weights[i].sqrt()).collect();
        let gram = self.gram.submatrix(indices);
        let weighted = Matrix::from_fn(indices.len(), |i, j| gram[(i, j)] * (root[i] * root[j]));
        RestrictedOperator {
            interval: self.interval,
            variance: self.variance,
            positions: indices.iter().map(|&i| self.positions[i]).collect(),
            weights: indices.iter().map(|&i| self.weights[i]).collect(),
            gram,
            weighted,
        }
    }

    pub fn interval(&self) -> Window {
        self.interval
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Number of contributing points.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Unweighted Gram matrix `G`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `D^{1/2} G D^{1/2}`.
    pub fn weighted(&self) -> &Matrix {
        &self.weighted
    }

    /// The unrestricted atom `p_ε(· - θ_i)`.
    pub fn atom(&self, i: usize) -> GaussianBump {
        GaussianBump::unit(self.positions[i], self.variance)
    }

    pub fn domain(&self) -> Domain {
        Domain::Interval(self.interval)
    }
}

/// `‖e_θ‖²` for every contributor, the diagonal of the Gram matrix.
pub fn atom_norms(op: &RestrictedOperator) -> Vec<f64> {
    op.gram.diagonal()
}

/// `c_i = ⟨f, e_θi⟩` over the operator's interval.
pub fn coefficient_vector(op: &RestrictedOperator, f: &TargetFunction) -> Vec<f64> {
    let domain = op.domain();
    (0..op.len())
        .map(|i| gaussians::inner_with_atom(f, &op.atom(i).into(), domain))
        .collect()
}

/// `⟨A_Q f, f⟩ = Σ w_i c_i²`.
pub fn quadratic_form(op: &RestrictedOperator, f: &TargetFunction) -> f64 {
    coefficient_vector(op, f)
        .iter()
        .zip(&op.weights)
        .map(|(c, w)| w * c * c)
        .sum()
}

/// `A_Q f = Σ w_i c_i p_ε(· - θ_i)`, to be read on the operator's interval.
pub fn apply(op: &RestrictedOperator, f: &TargetFunction) -> TargetFunction {
    let coeffs = coefficient_vector(op, f);
    TargetFunction::new(
        coeffs
            .iter()
            .zip(&op.weights)
            .enumerate()
            .map(|(i, (c, w))| op.atom(i).with_coefficient(w * c).into())
            .collect(),
    )
}

/// `Σ_θ max_{u ∈ [a, b]} p_ε(u - θ)`; the maximum sits at `clamp(θ, a, b)`.
pub fn boundedness_certificate(
    config: &PointConfiguration,
    variance: f64,
    interval: Window,
) -> Result<f64> {
    check_variance(variance)?;
    Ok(config
        .points()
        .iter()
        .map(|&t| pdf(variance, t - t.clamp(interval.lo(), interval.hi())))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussians::{norm_sq, IndicatorAtom};

    const P2_ZERO: f64 = 0.28209479177387814;

    fn win(lo: f64, hi: f64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    fn op_for(points: Vec<f64>, interval: Window) -> RestrictedOperator {
        let cfg = PointConfiguration::unweighted(win(-100.0, 100.0), points).unwrap();
        build_restricted(&cfg, 1.0, interval, DEFAULT_TAIL_TOL).unwrap()
    }

    #[test]
    fn single_point_full_line() {
        let op = op_for(vec![0.0], win(-30.0, 30.0));
        assert_eq!(op.len(), 1);
        assert!((op.gram()[(0, 0)] - P2_ZERO).abs() < 1e-15);
        assert_eq!(op.weighted()[(0, 0)], op.gram()[(0, 0)]);
    }

    #[test]
    fn two_point_gram() {
        let op = op_for(vec![-1.0, 1.0], win(-30.0, 30.0));
        let off = P2_ZERO * (-1.0f64).exp();
        assert!((op.gram()[(0, 0)] - P2_ZERO).abs() < 1e-15);
        assert!((op.gram()[(1, 1)] - P2_ZERO).abs() < 1e-15);
        assert!((op.gram()[(0, 1)] - off).abs() < 1e-15);
        assert_eq!(op.gram()[(0, 1)], op.gram()[(1, 0)]);
    }

    #[test]
    fn zero_weights_give_zero_operator() {
        let cfg = PointConfiguration::new(win(-5.0, 5.0), vec![-1.0, 0.5], vec![0.0, 0.0]).unwrap();
        let op = build_restricted(&cfg, 1.0, win(-3.0, 3.0), DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(op.len(), 2);
        assert!(op.weighted().as_slice().iter().all(|&x| x == 0.0));
        let f = TargetFunction::single(IndicatorAtom::unit(-1.0, 1.0));
        assert_eq!(quadratic_form(&op, &f), 0.0);
    }

    #[test]
    fn far_points_are_dropped() {
        let interval = win(0.0, 1.0);
        let op = op_for(vec![-50.0, 0.5, 60.0], interval);
        assert_eq!(op.positions(), &[0.5]);
        let far = projected_norm_sq(-50.0, 1.0, interval);
        assert!(far <= contributor_threshold(1.0, interval, DEFAULT_TAIL_TOL));
    }

    #[test]
    fn zero_length_interval_is_rank_zero() {
        let op = op_for(vec![0.0, 1.0], win(0.5, 0.5));
        assert!(op.is_empty());
        assert_eq!(
            apply(&op, &TargetFunction::single(GaussianBump::unit(0.0, 1.0)))
                .atoms()
                .len(),
            0
        );
    }

    #[test]
    fn invalid_arguments() {
        let cfg = PointConfiguration::empty(win(0.0, 1.0));
        assert!(build_restricted(&cfg, 0.0, win(0.0, 1.0), 1e-30).is_err());
        assert!(build_restricted(&cfg, 1.0, win(0.0, 1.0), 0.0).is_err());
        assert!(build_restricted(&cfg, 1.0, win(0.0, 1.0), 1.0).is_err());
        assert!(boundedness_certificate(&cfg, -1.0, win(0.0, 1.0)).is_err());
    }

    #[test]
    fn coefficient_of_indicator() {
        let op = op_for(vec![0.0], win(-30.0, 30.0));
        let f = TargetFunction::single(IndicatorAtom::unit(0.0, 1.0));
        let c = coefficient_vector(&op, &f);
        assert!((c[0] - (gaussians::normal_cdf(1.0) - 0.5)).abs() < 1e-15);
        assert!(coefficient_vector(&op, &f.scaled(0.0))
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn apply_consistent_with_quadratic_form() {
        let cfg = PointConfiguration::new(
            win(-10.0, 10.0),
            vec![-2.0, -0.3, 0.4, 3.0],
            vec![1.0, 0.5, 2.0, 0.1],
        )
        .unwrap();
        let op = build_restricted(&cfg, 0.8, win(-1.5, 2.5), DEFAULT_TAIL_TOL).unwrap();
        let f = TargetFunction::new(vec![
            GaussianBump::new(0.2, 0.5, 1.3).unwrap().into(),
            IndicatorAtom::new(-1.0, 0.7, -0.4).unwrap().into(),
        ]);
        let af = apply(&op, &f);
        let lhs = gaussians::inner_product(&af, &f, op.domain());
        let q = quadratic_form(&op, &f);
        assert!(((lhs - q) / q).abs() < 1e-10, "{lhs} vs {q}");
        assert!(q / norm_sq(&f, op.domain()) > 0.0);
    }

    #[test]
    fn certificate_cases() {
        let one = PointConfiguration::unweighted(win(-10.0, 10.0), vec![0.3]).unwrap();
        let c = boundedness_certificate(&one, 2.0, win(0.0, 1.0)).unwrap();
        assert!((c - 1.0 / (4.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
        let right = PointConfiguration::unweighted(win(-10.0, 10.0), vec![3.5]).unwrap();
        let c = boundedness_certificate(&right, 1.0, win(0.0, 1.0)).unwrap();
        assert_eq!(c, gaussians::density(1.0, 2.5).unwrap());
    }

    #[test]
    fn subset_matches_rebuild() {
        let op = op_for(vec![-1.0, 0.0, 2.0], win(-2.0, 2.0));
        let sub = op.subset(&[2, 0]);
        let direct = op_for(vec![2.0, -1.0].into_iter().rev().collect(), win(-2.0, 2.0));
        assert_eq!(sub.positions(), &[2.0, -1.0]);
        assert_eq!(sub.gram()[(0, 1)], direct.gram()[(0, 1)]);
        assert_eq!(sub.gram()[(0, 0)], direct.gram()[(1, 1)]);
    }
}

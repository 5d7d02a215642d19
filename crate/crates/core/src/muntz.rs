//! Least-squares distance from a target function to the span of projected
//! Gaussian shifts, and how it shrinks as more shifts are admitted.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaussians::{norm_sq, TargetFunction};
use crate::operator::{build_restricted, coefficient_vector, RestrictedOperator, DEFAULT_TAIL_TOL};
use crate::pointproc::{PointConfiguration, Window};
use crate::spectral::eigen_sym;

/// Eigenvalues of the Gram matrix below this fraction of the largest are
/// treated as zero in the pseudo-inverse.
pub const PSEUDO_INVERSE_FLOOR: f64 = 1e-12;

/// Order in which atoms are admitted along a [`DensityCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    #[default]
    ByDistanceToCenter,
    ByIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    /// Number of atoms in each nested span.
    pub counts: Vec<usize>,
    pub distances: Vec<f64>,
    /// [`span_distance`] for each prefix on its own.
    pub prefix_distances: Vec<f64>,
    pub target_norm: f64,
}

impl DensityCurve {
    pub fn final_distance(&self) -> f64 {
        self.distances.last().copied().unwrap_or(self.target_norm)
    }

    pub fn final_relative_distance(&self) -> f64 {
        if self.target_norm > 0.0 {
            self.final_distance() / self.target_norm
        } else {
            0.0
        }
    }

    /// Distances never grow by more than `slack · ‖f‖` between steps.
    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.distances
            .windows(2)
            .all(|d| d[1] <= d[0] + slack * self.target_norm)
    }
}

/// `d(f, span{e_θ})` in `L²([a, b])`: `sqrt(‖f‖² - cᵀ G⁺ c)`.
pub fn span_distance(op: &RestrictedOperator, f: &TargetFunction) -> Result<f64> {
    let f_sq = norm_sq(f, op.domain());
    if op.is_empty() {
        return Ok(f_sq.sqrt());
    }
    let c = coefficient_vector(op, f);
    let eig = eigen_sym(op.gram())?;
    let floor = PSEUDO_INVERSE_FLOOR * eig.values[0];
    let projected: f64 = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(&mu, _)| mu > floor && mu > 0.0)
        .map(|(mu, v)| {
            let dot: f64 = v.iter().zip(&c).map(|(a, b)| a * b).sum();
            dot * dot / mu
        })
        .sum();
    Ok((f_sq - projected).max(0.0).sqrt())
}

/// Sizes `1, 2, 4, …` capped by and ending at `total`.
pub fn doubling_grid(total: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = 1;
    while k < total {
        out.push(k);
        k *= 2;
    }
    if total > 0 {
        out.push(total);
    }
    out
}

/// Span distances for nested families of atoms under `ordering`.
///
/// Each entry is the smaller of [`span_distance`] for the current prefix and
/// the previous entry. Pseudo-inverse truncations of nested Gram matrices are
/// not themselves nested, but every retained subspace of a shorter prefix lies
/// in the span of a longer one, so each entry is still an exact distance to a
/// subspace of the `k`-atom span.
pub fn density_curve(
    config: &PointConfiguration,
    variance: f64,
    interval: Window,
    f: &TargetFunction,
    ordering: Ordering,
) -> Result<DensityCurve> {
    let op = build_restricted(config, variance, interval, DEFAULT_TAIL_TOL)?;
    let target_norm = norm_sq(f, op.domain()).sqrt();
    let mut order: Vec<usize> = (0..op.len()).collect();
    if ordering == Ordering::ByDistanceToCenter {
        let c = interval.center();
        let pos = op.positions();
        order.sort_by(|&a, &b| (pos[a] - c).abs().total_cmp(&(pos[b] - c).abs()));
    }
    let grid = doubling_grid(order.len());
    if grid.is_empty() {
        return Ok(DensityCurve {
            counts: vec![0],
            distances: vec![target_norm],
            prefix_distances: vec![target_norm],
            target_norm,
        });
    }
    let prefix_distances = grid
        .iter()
        .map(|&k| span_distance(&op.subset(&order[..k]), f))
        .collect::<Result<Vec<f64>>>()?;
    let mut distances = prefix_distances.clone();
    for i in 1..distances.len() {
        distances[i] = distances[i].min(distances[i - 1]);
    }
    Ok(DensityCurve {
        counts: grid,
        distances,
        prefix_distances,
        target_norm,
    })
}

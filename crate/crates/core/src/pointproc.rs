//! Stationary point processes on finite windows and the count statistics
//! built from them.
//!
//! All intervals are half-open, `[lo, hi)`, including the unit cells
//! `[n, n + 1)` used by [`unit_counts`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Burn-in before the window start for renewal processes, in mean gaps.
pub const RENEWAL_BURN_IN_GAPS: f64 = 10.0;

/// A finite half-open interval `[lo, hi)` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWindow", into = "RawWindow")]
pub struct Window {
    lo: f64,
    hi: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    lo: f64,
    hi: f64,
}

impl TryFrom<RawWindow> for Window {
    type Error = Error;

    fn try_from(raw: RawWindow) -> Result<Self> {
        Window::new(raw.lo, raw.hi)
    }
}

impl From<Window> for RawWindow {
    fn from(w: Window) -> Self {
        RawWindow { lo: w.lo, hi: w.hi }
    }
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "window bounds must be finite, got [{lo}, {hi})"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "window lower bound {lo} exceeds upper bound {hi}"
            )));
        }
        Ok(Window { lo, hi })
    }

    /// The symmetric window `[-x, x)`.
    pub fn symmetric(x: f64) -> Result<Self> {
        Window::new(-x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    /// True when `other` lies inside `self`.
    pub fn covers(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// The window widened by `pad` on both sides.
    pub fn padded(&self, pad: f64) -> Result<Self> {
        Window::new(self.lo - pad, self.hi + pad)
    }

    fn require_covers(&self, lo: f64, hi: f64) -> Result<()> {
        if self.lo <= lo && hi <= self.hi {
            Ok(())
        } else {
            Err(Error::OutsideWindow {
                lo,
                hi,
                window_lo: self.lo,
                window_hi: self.hi,
            })
        }
    }
}

/// Law of a stationary point process on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProcessSpec {
    /// Homogeneous Poisson process.
    Poisson { intensity: f64 },
    /// Renewal process with Gamma(shape, mean) inter-arrival times.
    Renewal { shape: f64, mean: f64 },
    /// Lattice `s + kΔ` with `s ~ Uniform[0, Δ)`.
    ShiftedLattice { spacing: f64 },
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        match *self {
            ProcessSpec::Poisson { intensity } => check("intensity", intensity),
            ProcessSpec::Renewal { shape, mean } => {
                check("shape", shape)?;
                check("mean", mean)
            }
            ProcessSpec::ShiftedLattice { spacing } => check("spacing", spacing),
        }
    }

    /// Expected number of points per unit length.
    pub fn intensity(&self) -> f64 {
        match *self {
            ProcessSpec::Poisson { intensity } => intensity,
            ProcessSpec::Renewal { mean, .. } => 1.0 / mean,
            ProcessSpec::ShiftedLattice { spacing } => 1.0 / spacing,
        }
    }
}

/// A finite realization of a point process: sorted positions and
/// nonnegative weights attached to them.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    window: Window,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl PointConfiguration {
    pub fn new(window: Window, points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        for pair in points.windows(2) {
            if pair[0] >= pair[1] || pair[0].is_nan() {
                return Err(Error::InvalidParameter(format!(
                    "points must be strictly increasing ({} then {})",
                    pair[0], pair[1]
                )));
            }
        }
        if let Some(&p) = points.iter().find(|&&p| !window.contains(p)) {
            return Err(Error::InvalidParameter(format!(
                "point {p} outside window [{}, {})",
                window.lo, window.hi
            )));
        }
        if let Some(&w) = weights.iter().find(|&&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "weights must be finite and nonnegative, got {w}"
            )));
        }
        Ok(PointConfiguration {
            window,
            points,
            weights,
        })
    }

    /// Unit weights on every point.
    pub fn unweighted(window: Window, points: Vec<f64>) -> Result<Self> {
        let weights = vec![1.0; points.len()];
        Self::new(window, points, weights)
    }

    pub fn empty(window: Window) -> Self {
        PointConfiguration {
            window,
            points: Vec::new(),
            weights: Vec::new(),
        }
    }

    /// The lattice `shift + kΔ` restricted to `window`, unit weights.
    pub fn lattice(window: Window, spacing: f64, shift: f64) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) || !shift.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lattice needs positive spacing and finite shift, got {spacing}, {shift}"
            )));
        }
        let mut points = Vec::new();
        let mut k = ((window.lo - shift) / spacing).ceil();
        loop {
            let p = shift + k * spacing;
            if p >= window.hi {
                break;
            }
            if p >= window.lo {
                points.push(p);
            }
            k += 1.0;
        }
        Self::unweighted(window, points)
    }

    /// Replace the weights, keeping positions.
    pub fn with_weights(self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.window, self.points, weights)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(position, weight)` pairs in increasing position order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Index range of points in `[lo, hi)`, no window check.
    pub(crate) fn index_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.points.partition_point(|&p| p < lo);
        let end = self.points.partition_point(|&p| p < hi).max(start);
        start..end
    }
}

/// Seed for replication `replication` of a run with `master_seed`.
///
/// A SplitMix64 finalizer over both inputs, so every replication owns an
/// independent stream regardless of the order replications execute in.
pub fn stream_seed(master_seed: u64, replication: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(master_seed) ^ replication)
}

/// Draw a realization of `spec` on `window`. Deterministic in `seed`.
pub fn sample(spec: &ProcessSpec, window: Window, seed: u64) -> Result<PointConfiguration> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if window.is_empty() {
        return Ok(PointConfiguration::empty(window));
    }
    let mut points = match *spec {
        ProcessSpec::Poisson { intensity } => {
            let mean = intensity * window.len();
            let law = Poisson::new(mean)
                .map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))?;
            let count = law.sample(&mut rng) as usize;
            let mut points = Vec::with_capacity(count);
            while points.len() < count {
                let p = window.lo + rng.random::<f64>() * window.len();
                // lo + u*len can round up to hi
                if p < window.hi {
                    points.push(p);
                }
            }
            points.sort_by(f64::total_cmp);
            points
        }
        ProcessSpec::Renewal { shape, mean } => {
            let law = Gamma::new(shape, mean / shape)
                .map_err(|e| Error::InvalidParameter(format!("Gamma({shape}, {mean}): {e}")))?;
            let mut t = window.lo - RENEWAL_BURN_IN_GAPS * mean;
            let mut points = Vec::new();
            loop {
                t += law.sample(&mut rng);
                if t >= window.hi {
                    break;
                }
                if t >= window.lo {
                    points.push(t);
                }
            }
            points
        }
        ProcessSpec::ShiftedLattice { spacing } => {
            let shift = rng.random::<f64>() * spacing;
            return PointConfiguration::lattice(window, spacing, shift);
        }
    };
    points.dedup();
    PointConfiguration::unweighted(window, points)
}

/// Counts of points in consecutive unit cells `[base + i, base + i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSequence {
    pub base: i64,
    pub counts: Vec<u64>,
}

impl CountSequence {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn check_prefix(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.counts.len() {
            Err(Error::IndexOutOfRange {
                index: n,
                len: self.counts.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Unit-cell counts `ξ_n = |Θ ∩ [n, n+1)|` for `n = first..=last`.
pub fn unit_counts(config: &PointConfiguration, first: i64, last: i64) -> Result<CountSequence> {
    if last < first {
        return Err(Error::InvalidParameter(format!(
            "empty cell range {first}..={last}"
        )));
    }
    config
        .window
        .require_covers(first as f64, (last + 1) as f64)?;
    let counts = (first..=last)
        .map(|n| config.index_range(n as f64, (n + 1) as f64).len() as u64)
        .collect();
    Ok(CountSequence {
        base: first,
        counts,
    })
}

/// Number of points in the half-open `interval`.
pub fn count_in(config: &PointConfiguration, interval: Window) -> Result<usize> {
    config.window.require_covers(interval.lo, interval.hi)?;
    Ok(config.index_range(interval.lo, interval.hi).len())
}

/// `S_n / n` over the first `n` cells.
pub fn ergodic_average(counts: &CountSequence, n: usize) -> Result<f64> {
    counts.check_prefix(n)?;
    let s: u64 = counts.counts[..n].iter().sum();
    Ok(s as f64 / n as f64)
}

/// Largest of the first `n` cell counts.
pub fn max_unit_count(counts: &CountSequence, n: usize) -> Result<u64> {
    counts.check_prefix(n)?;
    Ok(counts.counts[..n].iter().copied().max().unwrap_or(0))
}

/// `Σ 1/θ` over points in the closed range `[1, x]`.
pub fn reciprocal_sum(config: &PointConfiguration, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "reciprocal sum needs x >= 1, got {x}"
        )));
    }
    config.window.require_covers(1.0, x)?;
    let start = config.points.partition_point(|&p| p < 1.0);
    let end = config.points.partition_point(|&p| p <= x);
    Ok(config.points[start..end].iter().map(|p| p.recip()).sum())
}

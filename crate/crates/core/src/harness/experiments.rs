use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Experiment, ExperimentConfig};
use super::report::{median, Cell, Check, ExperimentReport, Statistic, Table};
use crate::error::{Error, Result};
use crate::gaussians::{self, pdf, Domain, GaussianBump, IndicatorAtom, TargetFunction};
use crate::muntz::{density_curve, DensityCurve};
use crate::operator::{build_restricted, quadratic_form};
use crate::pointproc::{self, sample, stream_seed, PointConfiguration, Window};
use crate::spectral::{
    self, decay_coordinate, decay_fit, eigenvalues_sym, width_tail_bound, TailBound,
};

/// Monte-Carlo bands are `k · SE` with this `k`.
pub const SE_BAND: f64 = 4.0;
/// Slack on the tail-bound inequality `d_{N_x} ≤ bound`.
pub const TAIL_BOUND_SLACK: f64 = 1e-10;
/// Relative tolerance on `nuclear_norm = trace`.
pub const NUCLEAR_TRACE_TOL: f64 = 1e-9;
/// Relative slack for the norm-growth monotonicity and Rayleigh checks.
pub const NORM_SLACK: f64 = 1e-10;
/// Slack (times `‖f‖`) allowed when a density curve steps upward.
pub const DENSITY_SLACK: f64 = 1e-8;

/// `Σ_θ w_θ p_ε(u0 - θ)`.
pub fn campbell_sum(config: &PointConfiguration, variance: f64, u0: f64) -> f64 {
    config.iter().map(|(t, w)| w * pdf(variance, u0 - t)).sum()
}

/// `Σ_θ w_θ ⟨f, p_ε(· - θ)⟩²` over the whole line.
pub fn frame_sum(config: &PointConfiguration, variance: f64, f: &TargetFunction) -> f64 {
    config
        .iter()
        .map(|(t, w)| {
            let c = gaussians::inner_with_atom(
                f,
                &GaussianBump::unit(t, variance).into(),
                Domain::FullLine,
            );
            w * c * c
        })
        .sum()
}

/// One `n` of a norm-growth replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormGrowthPoint {
    pub n: u32,
    pub norm: f64,
    pub max_count: u64,
    /// Left end of the most crowded unit cell in `[-n, n)`.
    pub crowded_cell: i64,
    pub scaled_statistic: f64,
    pub rayleigh_bound: f64,
}

/// `ln ln n / ln n`, the reciprocal of the scaling sequence `m_n`.
pub fn growth_scale(n: u32) -> f64 {
    let l = (n as f64).ln();
    l.ln() / l
}

/// Operator norms of `A` compressed to `[-n, n)` for each `n`, with the
/// crowded-cell Rayleigh lower bound.
pub fn norm_growth_replication(
    config: &PointConfiguration,
    variance: f64,
    n_grid: &[u32],
    tail_tol: f64,
) -> Result<Vec<NormGrowthPoint>> {
    n_grid
        .iter()
        .map(|&n| {
            let interval = Window::symmetric(n as f64)?;
            let op = build_restricted(config, variance, interval, tail_tol)?;
            let norm = eigenvalues_sym(op.weighted())?
                .first()
                .copied()
                .unwrap_or(0.0)
                .max(0.0);
            let ni = n as i64;
            let counts = pointproc::unit_counts(config, -ni, ni - 1)?;
            let max_count = pointproc::max_unit_count(&counts, counts.len())?;
            let offset = counts
                .counts
                .iter()
                .position(|&c| c == max_count)
                .expect("non-empty counts");
            let cell = -ni + offset as i64;
            let f = TargetFunction::single(IndicatorAtom::unit(cell as f64, (cell + 1) as f64));
            let f_sq = gaussians::norm_sq(&f, op.domain());
            let rayleigh_bound = quadratic_form(&op, &f) / f_sq;
            Ok(NormGrowthPoint {
                n,
                norm,
                max_count,
                crowded_cell: cell,
                scaled_statistic: growth_scale(n) * norm,
                rayleigh_bound,
            })
        })
        .collect()
}

/// Draw every replication's configuration and map it through `f`, in
/// replication order whatever the thread schedule.
fn replicate<T, F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<(PointConfiguration, T)>>
where
    T: Send,
    F: Fn(&PointConfiguration) -> Result<T> + Sync,
{
    (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let points = sample(
                &cfg.process,
                cfg.window,
                stream_seed(cfg.master_seed, r as u64),
            )?;
            let out = f(&points)?;
            Ok((points, out))
        })
        .collect()
}

struct Outcome {
    statistics: Vec<Statistic>,
    checks: Vec<Check>,
    tables: Vec<Table>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            statistics: Vec::new(),
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    fn stat(&mut self, s: Statistic) -> &Statistic {
        self.statistics.push(s);
        self.statistics.last().expect("just pushed")
    }
}

fn intensity_statistic(
    cfg: &ExperimentConfig,
    configs: &[&PointConfiguration],
) -> Result<Statistic> {
    let len = cfg.window.len();
    let values = configs
        .iter()
        .map(|c| if len > 0.0 { c.len() as f64 / len } else { 0.0 })
        .collect();
    Ok(Statistic::new("intensity_estimate", values)?.with_theoretical(cfg.process.intensity()))
}

fn band_check(name: &str, stat: &Statistic, target: f64) -> Check {
    Check::new(
        name,
        stat.within_se(target, SE_BAND),
        format!(
            "mean {:.6} vs {:.6}, |diff| {:.3e}, {SE_BAND}·SE {:.3e}",
            stat.mean,
            target,
            (stat.mean - target).abs(),
            SE_BAND * stat.std_error
        ),
    )
}

/// Run `experiment` under `cfg`.
pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate(experiment)?;
    let start = Instant::now();
    let outcome = match experiment {
        Experiment::Campbell => campbell(cfg)?,
        Experiment::FrameBound => frame_bound(cfg)?,
        Experiment::Nuclear => nuclear(cfg)?,
        Experiment::Widths => widths(cfg)?,
        Experiment::NormGrowth => norm_growth(cfg)?,
        Experiment::Divergence => divergence(cfg)?,
        Experiment::Muntz => muntz(cfg)?,
        Experiment::Sample => sample_points(cfg)?,
        Experiment::Spectrum => spectrum(cfg)?,
    };
    let mut config = cfg.clone();
    config.experiment = Some(experiment);
    Ok(ExperimentReport {
        experiment,
        master_seed: cfg.master_seed,
        replications: cfg.replications,
        config,
        runtime_seconds: start.elapsed().as_secs_f64(),
        statistics: outcome.statistics,
        checks: outcome.checks,
        tables: outcome.tables,
    })
}

pub fn run_campbell(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run(Experiment::Campbell, cfg)
}

pub fn run_frame_bound(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run(Experiment::FrameBound, cfg)
}

pub fn run_nuclear(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run(Experiment::Nuclear, cfg)
}

pub fn run_widths(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run(Experiment::Widths, cfg)
}

pub fn run_norm_growth(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run(Experiment::NormGrowth, cfg)
}

pub fn run_divergence(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run(Experiment::Divergence, cfg)
}

pub fn run_muntz(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run(Experiment::Muntz, cfg)
}

fn campbell(cfg: &ExperimentConfig) -> Result<Outcome> {
    let probes = if cfg.probes.is_empty() {
        vec![0.0]
    } else {
        cfg.probes.clone()
    };
    let reps = replicate(cfg, |pts| {
        Ok(probes
            .iter()
            .map(|&u| campbell_sum(pts, cfg.variance, u))
            .collect::<Vec<f64>>())
    })?;
    let lambda = cfg.process.intensity();
    let mut out = Outcome::new();
    let mut table = Table::new("campbell", vec!["replication", "probe", "u0", "sum"]);
    for (j, &u) in probes.iter().enumerate() {
        let values: Vec<f64> = reps.iter().map(|(_, v)| v[j]).collect();
        for (r, &v) in values.iter().enumerate() {
            table.push(vec![r.into(), j.into(), u.into(), v.into()]);
        }
        let stat =
            out.stat(Statistic::new(format!("campbell_sum_{j}"), values)?.with_theoretical(lambda));
        let check = band_check(&format!("campbell_mean_{j}"), stat, lambda);
        out.checks.push(check);
    }
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    out.tables.push(table);
    Ok(out)
}

fn frame_bound(cfg: &ExperimentConfig) -> Result<Outcome> {
    let f = cfg.target()?;
    let f_sq = gaussians::norm_sq(f, Domain::FullLine);
    if f_sq.is_nan() || f_sq <= 0.0 {
        return Err(Error::Config(
            "frame-bound needs a target with positive norm".into(),
        ));
    }
    let reps = replicate(cfg, |pts| Ok(frame_sum(pts, cfg.variance, f)))?;
    let bound = cfg.process.intensity() * f_sq;
    let mut out = Outcome::new();
    let values = reps.iter().map(|(_, v)| *v).collect();
    let stat = out.stat(Statistic::new("frame_sum", values)?.with_theoretical(bound));
    let violated = stat.mean - SE_BAND * stat.std_error > bound;
    let detail = format!(
        "mean {:.6} ± {SE_BAND}·{:.3e} vs bound C‖f‖² = {:.6}",
        stat.mean, stat.std_error, bound
    );
    out.checks
        .push(Check::new("frame_bound", !violated, detail));
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    Ok(out)
}

fn nuclear(cfg: &ExperimentConfig) -> Result<Outcome> {
    let interval = cfg.interval()?;
    let reps = replicate(cfg, |pts| {
        let op = build_restricted(pts, cfg.variance, interval, cfg.tail_tol)?;
        spectral::spectrum(&op)
    })?;
    let theory = cfg.process.intensity() * interval.len() * pdf(2.0 * cfg.variance, 0.0);
    let mut out = Outcome::new();
    let traces: Vec<f64> = reps.iter().map(|(_, s)| s.trace).collect();
    let nuclear: Vec<f64> = reps.iter().map(|(_, s)| s.nuclear_norm).collect();
    let worst = reps
        .iter()
        .map(|(_, s)| {
            let gap = (s.nuclear_norm - s.trace).abs();
            if s.trace > 0.0 {
                gap / s.trace
            } else {
                gap
            }
        })
        .fold(0.0, f64::max);
    out.checks.push(Check::new(
        "nuclear_equals_trace",
        worst <= NUCLEAR_TRACE_TOL,
        format!("worst relative gap {worst:.3e} (tolerance {NUCLEAR_TRACE_TOL:e})"),
    ));
    let stat = out.stat(Statistic::new("trace", traces)?.with_theoretical(theory));
    let check = band_check("trace_mean", stat, theory);
    out.checks.push(check);
    out.stat(Statistic::new("nuclear_norm", nuclear)?);
    out.stat(Statistic::new(
        "operator_norm",
        reps.iter().map(|(_, s)| s.operator_norm).collect(),
    )?);
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    Ok(out)
}

struct WidthsRecord {
    summary: spectral::SpectralSummary,
    tails: Vec<(f64, TailBound, f64, bool)>,
    fit: Option<spectral::DecayFit>,
}

fn widths(cfg: &ExperimentConfig) -> Result<Outcome> {
    let interval = cfg.interval()?;
    let reps = replicate(cfg, |pts| {
        let op = build_restricted(pts, cfg.variance, interval, cfg.tail_tol)?;
        let summary = spectral::spectrum(&op)?;
        let tails = cfg
            .x_grid
            .iter()
            .map(|&x| {
                let tb = width_tail_bound(pts, cfg.variance, interval, x)?;
                let d = summary.width(tb.n_x);
                Ok((x, tb, d, d <= tb.bound + TAIL_BOUND_SLACK))
            })
            .collect::<Result<Vec<_>>>()?;
        let fit = match decay_fit(&summary.widths, cfg.variance) {
            Ok(fit) => Some(fit),
            Err(Error::InsufficientWidths { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(WidthsRecord {
            summary,
            tails,
            fit,
        })
    })?;

    let mut out = Outcome::new();
    let mut wtable = Table::new("widths", vec!["replication", "n", "d_n", "log_d_n", "y_n"]);
    let mut ttable = Table::new(
        "tail_bound",
        vec!["replication", "x", "n_x", "d_n_x", "bound", "passed"],
    );
    let (mut checks, mut passes) = (0usize, 0usize);
    for (r, (_, rec)) in reps.iter().enumerate() {
        for (n, &d) in rec.summary.widths.iter().enumerate() {
            if d > 0.0 {
                wtable.push(vec![
                    r.into(),
                    n.into(),
                    d.into(),
                    d.ln().into(),
                    decay_coordinate(d, cfg.variance).into(),
                ]);
            }
        }
        for &(x, tb, d, ok) in &rec.tails {
            checks += 1;
            passes += ok as usize;
            ttable.push(vec![
                r.into(),
                x.into(),
                tb.n_x.into(),
                d.into(),
                tb.bound.into(),
                ok.into(),
            ]);
        }
    }
    out.checks.push(Check::new(
        "tail_bound",
        passes == checks,
        format!("{passes}/{checks} tail-bound checks hold (slack {TAIL_BOUND_SLACK:e})"),
    ));

    let fits: Vec<Option<spectral::DecayFit>> = reps.iter().map(|(_, r)| r.fit).collect();
    let failures = fits.iter().filter(|f| f.is_none()).count();
    // a replication without enough usable widths counts as a flat, unexplained fit
    let slopes: Vec<f64> = fits.iter().map(|f| f.map_or(0.0, |f| f.slope)).collect();
    let r2: Vec<f64> = fits
        .iter()
        .map(|f| f.map_or(0.0, |f| f.r_squared))
        .collect();
    let med_slope = median(&slopes);
    let med_r2 = median(&r2);
    out.checks.push(Check::new(
        "decay_slope_positive",
        med_slope > 0.0,
        format!("median slope {med_slope:.6} ({failures} replications without a fit)"),
    ));
    out.checks.push(Check::new(
        "decay_fit_quality",
        med_r2 >= 0.9,
        format!("median r² {med_r2:.6}"),
    ));
    out.stat(Statistic::new("decay_slope", slopes)?);
    out.stat(Statistic::new(
        "decay_intercept",
        fits.iter()
            .map(|f| f.map_or(0.0, |f| f.intercept))
            .collect(),
    )?);
    out.stat(Statistic::new("decay_r_squared", r2)?);
    out.stat(Statistic::new(
        "operator_norm",
        reps.iter().map(|(_, r)| r.summary.operator_norm).collect(),
    )?);
    out.stat(Statistic::new(
        "rank",
        reps.iter()
            .map(|(_, r)| r.summary.rank(1e-12) as f64)
            .collect(),
    )?);
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    out.tables.push(wtable);
    out.tables.push(ttable);
    Ok(out)
}

fn norm_growth(cfg: &ExperimentConfig) -> Result<Outcome> {
    let reps = replicate(cfg, |pts| {
        norm_growth_replication(pts, cfg.variance, &cfg.n_grid, cfg.tail_tol)
    })?;
    let mut out = Outcome::new();
    let mut table = Table::new(
        "norm_growth",
        vec![
            "replication",
            "n",
            "norm",
            "max_count",
            "scaled_statistic",
            "rayleigh_bound",
        ],
    );
    let (mut monotone, mut rayleigh) = (true, true);
    for (r, (_, points)) in reps.iter().enumerate() {
        for (i, p) in points.iter().enumerate() {
            table.push(vec![
                r.into(),
                Cell::Int(p.n as i64),
                p.norm.into(),
                p.max_count.into(),
                p.scaled_statistic.into(),
                p.rayleigh_bound.into(),
            ]);
            rayleigh &= p.norm >= p.rayleigh_bound * (1.0 - NORM_SLACK);
            if i > 0 {
                monotone &= p.norm >= points[i - 1].norm * (1.0 - NORM_SLACK);
            }
        }
    }
    out.checks.push(Check::new(
        "norm_nondecreasing",
        monotone,
        "operator norm nondecreasing along the n-grid in every replication",
    ));
    out.checks.push(Check::new(
        "rayleigh_lower_bound",
        rayleigh,
        "norm ≥ crowded-cell Rayleigh quotient in every replication",
    ));
    for (i, &n) in cfg.n_grid.iter().enumerate() {
        let column = |g: fn(&NormGrowthPoint) -> f64| {
            reps.iter().map(|(_, p)| g(&p[i])).collect::<Vec<f64>>()
        };
        out.stat(Statistic::new(format!("norm_n{n}"), column(|p| p.norm))?);
        out.stat(Statistic::new(
            format!("max_count_n{n}"),
            column(|p| p.max_count as f64),
        )?);
        out.stat(Statistic::new(
            format!("scaled_n{n}"),
            column(|p| p.scaled_statistic),
        )?);
    }
    let first = cfg.n_grid[0];
    let last = *cfg.n_grid.last().expect("validated non-empty");
    let med = |n: u32| {
        out.statistics
            .iter()
            .find(|s| s.name == format!("scaled_n{n}"))
            .map(|s| s.median)
            .expect("statistic recorded")
    };
    let (lo, hi) = (med(first), med(last));
    out.checks.push(Check::new(
        "scaled_growth",
        cfg.n_grid.len() < 2 || hi > lo,
        format!("median scaled statistic {hi:.6} at n={last} vs {lo:.6} at n={first}"),
    ));
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    out.tables.push(table);
    Ok(out)
}

fn divergence(cfg: &ExperimentConfig) -> Result<Outcome> {
    let reps = replicate(cfg, |pts| {
        cfg.x_grid
            .iter()
            .map(|&x| pointproc::reciprocal_sum(pts, x))
            .collect::<Result<Vec<f64>>>()
    })?;
    let lambda = cfg.process.intensity();
    let mut out = Outcome::new();
    let mut table = Table::new("divergence", vec!["replication", "x", "reciprocal_sum"]);
    let mut sorted_x = cfg.x_grid.clone();
    sorted_x.sort_by(f64::total_cmp);
    let mut monotone = true;
    for (r, (_, sums)) in reps.iter().enumerate() {
        let mut by_x: Vec<(f64, f64)> = cfg
            .x_grid
            .iter()
            .copied()
            .zip(sums.iter().copied())
            .collect();
        by_x.sort_by(|a, b| a.0.total_cmp(&b.0));
        monotone &= by_x.windows(2).all(|w| w[1].1 >= w[0].1);
        for (&x, &s) in cfg.x_grid.iter().zip(sums) {
            table.push(vec![r.into(), x.into(), s.into()]);
        }
    }
    out.checks.push(Check::new(
        "sums_nondecreasing",
        monotone,
        "reciprocal sums nondecreasing in x in every replication",
    ));
    for (j, &x) in cfg.x_grid.iter().enumerate() {
        let values = reps.iter().map(|(_, s)| s[j]).collect();
        out.stat(
            Statistic::new(format!("reciprocal_sum_{j}"), values)?
                .with_theoretical(lambda * x.ln()),
        );
    }
    let x_max = *sorted_x.last().expect("validated non-empty");
    let j = cfg
        .x_grid
        .iter()
        .position(|&x| x == x_max)
        .expect("present");
    let stat = out.statistics[j].clone();
    out.checks.push(band_check(
        "campbell_log_growth",
        &stat,
        lambda * x_max.ln(),
    ));
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    out.tables.push(table);
    Ok(out)
}

fn muntz(cfg: &ExperimentConfig) -> Result<Outcome> {
    let interval = cfg.interval()?;
    let f = cfg.target()?;
    let reps = replicate(cfg, |pts| {
        density_curve(pts, cfg.variance, interval, f, cfg.ordering)
    })?;
    let mut out = Outcome::new();
    let mut table = Table::new(
        "density",
        vec![
            "replication",
            "k",
            "distance",
            "relative_distance",
            "prefix_distance",
        ],
    );
    let curves: Vec<&DensityCurve> = reps.iter().map(|(_, c)| c).collect();
    for (r, c) in curves.iter().enumerate() {
        for ((&k, &d), &raw) in c.counts.iter().zip(&c.distances).zip(&c.prefix_distances) {
            let rel = if c.target_norm > 0.0 {
                d / c.target_norm
            } else {
                0.0
            };
            table.push(vec![r.into(), k.into(), d.into(), rel.into(), raw.into()]);
        }
    }
    let monotone = curves.iter().all(|c| c.is_nonincreasing(DENSITY_SLACK));
    out.checks.push(Check::new(
        "curves_nonincreasing",
        monotone,
        format!("every density curve nonincreasing (slack {DENSITY_SLACK:e}·‖f‖)"),
    ));
    let rel: Vec<f64> = curves.iter().map(|c| c.final_relative_distance()).collect();
    let med = median(&rel);
    out.checks.push(Check::new(
        "median_final_distance",
        med <= cfg.muntz_threshold,
        format!(
            "median final d/‖f‖ = {med:.6e} (threshold {})",
            cfg.muntz_threshold
        ),
    ));
    out.stat(Statistic::new("final_relative_distance", rel)?);
    out.stat(Statistic::new(
        "atoms",
        curves
            .iter()
            .map(|c| *c.counts.last().unwrap_or(&0) as f64)
            .collect(),
    )?);
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    out.tables.push(table);
    Ok(out)
}

fn sample_points(cfg: &ExperimentConfig) -> Result<Outcome> {
    let reps = replicate(cfg, |_| Ok(()))?;
    let mut out = Outcome::new();
    let mut table = Table::new("points", vec!["replication", "index", "theta", "weight"]);
    for (r, (pts, _)) in reps.iter().enumerate() {
        for (i, (t, w)) in pts.iter().enumerate() {
            table.push(vec![r.into(), i.into(), t.into(), w.into()]);
        }
    }
    out.stat(Statistic::new(
        "count",
        reps.iter().map(|(p, _)| p.len() as f64).collect(),
    )?);
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    out.tables.push(table);
    Ok(out)
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Outcome> {
    let interval = cfg.interval()?;
    let reps = replicate(cfg, |pts| {
        let op = build_restricted(pts, cfg.variance, interval, cfg.tail_tol)?;
        Ok((op.len(), spectral::spectrum(&op)?))
    })?;
    let mut out = Outcome::new();
    let mut table = Table::new("eigenvalues", vec!["replication", "index", "eigenvalue"]);
    for (r, (_, (_, s))) in reps.iter().enumerate() {
        for (i, &mu) in s.eigenvalues.iter().enumerate() {
            table.push(vec![r.into(), i.into(), mu.into()]);
        }
    }
    out.stat(Statistic::new(
        "operator_norm",
        reps.iter().map(|(_, (_, s))| s.operator_norm).collect(),
    )?);
    out.stat(Statistic::new(
        "nuclear_norm",
        reps.iter().map(|(_, (_, s))| s.nuclear_norm).collect(),
    )?);
    out.stat(Statistic::new(
        "trace",
        reps.iter().map(|(_, (_, s))| s.trace).collect(),
    )?);
    out.stat(Statistic::new(
        "contributors",
        reps.iter().map(|(_, (n, _))| *n as f64).collect(),
    )?);
    let configs: Vec<_> = reps.iter().map(|(c, _)| c).collect();
    out.stat(intensity_statistic(cfg, &configs)?);
    out.tables.push(table);
    Ok(out)
}

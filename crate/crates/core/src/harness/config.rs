use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussians::TargetFunction;
use crate::muntz::Ordering;
use crate::operator::DEFAULT_TAIL_TOL;
use crate::pointproc::{ProcessSpec, Window};

/// Standard deviations of padding an operator window should carry around
/// its interval.
pub const WINDOW_PADDING_SDS: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Campbell,
    FrameBound,
    Nuclear,
    Widths,
    NormGrowth,
    Divergence,
    Muntz,
    Sample,
    Spectrum,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Campbell,
        Experiment::FrameBound,
        Experiment::Nuclear,
        Experiment::Widths,
        Experiment::NormGrowth,
        Experiment::Divergence,
        Experiment::Muntz,
        Experiment::Sample,
        Experiment::Spectrum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Campbell => "campbell",
            Experiment::FrameBound => "frame-bound",
            Experiment::Nuclear => "nuclear",
            Experiment::Widths => "widths",
            Experiment::NormGrowth => "norm-growth",
            Experiment::Divergence => "divergence",
            Experiment::Muntz => "muntz",
            Experiment::Sample => "sample",
            Experiment::Spectrum => "spectrum",
        }
    }

    fn needs_interval(&self) -> bool {
        matches!(
            self,
            Experiment::Nuclear | Experiment::Widths | Experiment::Muntz | Experiment::Spectrum
        )
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

/// One experiment run, as read from a JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; the command line names the experiment when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    pub process: ProcessSpec,
    #[serde(default = "default_variance")]
    pub variance: f64,
    /// The `[a, b]` the operator is compressed to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<Window>,
    /// Where points are sampled.
    pub window: Window,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Probe points for `campbell`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_grid: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetFunction>,
    #[serde(default)]
    pub ordering: Ordering,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    /// Largest acceptable median final relative distance for `muntz`.
    #[serde(default = "default_muntz_threshold")]
    pub muntz_threshold: f64,
}

fn default_variance() -> f64 {
    1.0
}

fn default_replications() -> usize {
    1
}

fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_TOL
}

fn default_muntz_threshold() -> f64 {
    0.05
}

impl ExperimentConfig {
    /// A config with defaults for everything but the process and window.
    pub fn new(process: ProcessSpec, window: Window) -> Self {
        ExperimentConfig {
            experiment: None,
            process,
            variance: default_variance(),
            interval: None,
            window,
            replications: default_replications(),
            master_seed: 0,
            probes: Vec::new(),
            x_grid: Vec::new(),
            n_grid: Vec::new(),
            target: None,
            ordering: Ordering::default(),
            tail_tol: default_tail_tol(),
            muntz_threshold: default_muntz_threshold(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn interval(&self) -> Result<Window> {
        self.interval
            .ok_or_else(|| Error::Config("this experiment needs an 'interval'".into()))
    }

    pub fn target(&self) -> Result<&TargetFunction> {
        self.target
            .as_ref()
            .ok_or_else(|| Error::Config("this experiment needs a 'target' function".into()))
    }

    pub fn padding(&self) -> f64 {
        WINDOW_PADDING_SDS * self.variance.sqrt()
    }

    /// Check the fields `experiment` relies on.
    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.process
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if !(self.variance.is_finite() && self.variance > 0.0) {
            return bad(format!("variance must be positive, got {}", self.variance));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return bad(format!(
                "tail_tol must lie in (0, 1), got {}",
                self.tail_tol
            ));
        }
        if experiment.needs_interval() {
            let interval = self.interval()?;
            if !self.window.covers(&interval.padded(self.padding())?) {
                log::warn!(
                    "window [{}, {}) does not cover interval [{}, {}) padded by {:.3}; \
                     edge atoms are missing from the operator",
                    self.window.lo(),
                    self.window.hi(),
                    interval.lo(),
                    interval.hi(),
                    self.padding()
                );
            }
        }
        match experiment {
            Experiment::FrameBound | Experiment::Muntz => {
                self.target()?;
            }
            Experiment::Widths => {
                if self.x_grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                    return bad("x_grid entries must be positive".into());
                }
                if let Some(&x) = self
                    .x_grid
                    .iter()
                    .find(|&&x| -x < self.window.lo() || x > self.window.hi())
                {
                    return bad(format!("x_grid value {x} leaves the window"));
                }
            }
            Experiment::Divergence => {
                if self.x_grid.is_empty() {
                    return bad("divergence needs a non-empty x_grid".into());
                }
                if self.x_grid.iter().any(|&x| !(x >= 1.0 && x.is_finite())) {
                    return bad("divergence x_grid entries must be >= 1".into());
                }
                let max = self.x_grid.iter().copied().fold(1.0, f64::max);
                if self.window.lo() > 1.0 || self.window.hi() < max {
                    return bad(format!(
                        "window must cover [1, {max}] for the divergence sums"
                    ));
                }
            }
            Experiment::NormGrowth => {
                if self.n_grid.is_empty() {
                    return bad("norm-growth needs a non-empty n_grid".into());
                }
                if self.n_grid.iter().any(|&n| n < 3) {
                    return bad("norm-growth n_grid entries must be >= 3".into());
                }
                if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("norm-growth n_grid must be strictly increasing".into());
                }
                let n_max = *self.n_grid.last().expect("non-empty") as f64;
                let needed = Window::symmetric(n_max)?.padded(self.padding())?;
                if !self.window.covers(&needed) {
                    return bad(format!(
                        "window [{}, {}) is smaller than [-{n_max}, {n_max}) plus padding {:.3}",
                        self.window.lo(),
                        self.window.hi(),
                        self.padding()
                    ));
                }
            }
            Experiment::Campbell if self.probes.iter().any(|u| !u.is_finite()) => {
                return bad("probes must be finite".into());
            }
            _ => {}
        }
        Ok(())
    }
}

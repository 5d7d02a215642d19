//! Random integral operators with kernel `k(u, v) = Σ_θ p_ε(u - θ) p_ε(v - θ)`
//! over stationary point processes.
//!
//! The crate samples point configurations ([`pointproc`]), builds the
//! operator compressed to an interval from closed-form Gaussian inner
//! products ([`gaussians`], [`operator`]), and studies its spectrum
//! ([`spectral`]), the density of the shifted Gaussians ([`muntz`]), and a
//! set of replicated Monte-Carlo experiments ([`harness`]).

pub mod error;
pub mod gaussians;
pub mod harness;
pub mod matrix;
pub mod muntz;
pub mod operator;
pub mod pointproc;
pub mod spectral;

pub use error::{Error, Result};
pub use gaussians::{Atom, Domain, GaussianBump, IndicatorAtom, TargetFunction};
pub use harness::{Experiment, ExperimentConfig, ExperimentReport};
pub use matrix::Matrix;
pub use muntz::{DensityCurve, Ordering};
pub use operator::RestrictedOperator;
pub use pointproc::{CountSequence, PointConfiguration, ProcessSpec, Window};
pub use spectral::{DecayFit, Eigen, SpectralSummary, TailBound};

//! Seeded, replicated experiments and their reports.
//!
//! Replication `r` samples its configuration from
//! [`stream_seed`](crate::pointproc::stream_seed)`(master_seed, r)`, and results
//! are gathered in replication order, so reports do not depend on how
//! rayon schedules the work.

mod config;
mod experiments;
mod report;

pub use config::{Experiment, ExperimentConfig, WINDOW_PADDING_SDS};
pub use experiments::{
    campbell_sum, frame_sum, growth_scale, norm_growth_replication, run, run_campbell,
    run_divergence, run_frame_bound, run_muntz, run_norm_growth, run_nuclear, run_widths,
    NormGrowthPoint, DENSITY_SLACK, NORM_SLACK, NUCLEAR_TRACE_TOL, SE_BAND, TAIL_BOUND_SLACK,
};
pub use report::{
    format_float, mean, median, std_error, Cell, Check, ExperimentReport, Statistic, Table,
};

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use randop_core::{harness, Error, Experiment, ExperimentConfig};

const EXIT_INVALID_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

/// Run a seeded random-operator experiment and write its report.
#[derive(Parser, Debug)]
#[command(name = "randop", version, about)]
struct Cli {
    /// One of: campbell, frame-bound, nuclear, widths, norm-growth,
    /// divergence, muntz, sample, spectrum
    experiment: Experiment,

    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,

    /// Output directory [default: out/<experiment>]
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the config's master seed
    #[arg(long)]
    seed: Option<u64>,

    /// Override the config's replication count
    #[arg(long)]
    reps: Option<usize>,

    /// Exit with status 3 if any acceptance check fails
    #[arg(long)]
    check: bool,
}

fn exit_code(err: &Error) -> u8 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INVALID_CONFIG
    }
}

fn load(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::load(&cli.config)?;
    if let Some(named) = cfg.experiment {
        if named != cli.experiment {
            return Err(Error::Config(format!(
                "config is for '{named}' but '{}' was requested",
                cli.experiment
            )));
        }
    }
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(reps) = cli.reps {
        cfg.replications = reps;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_CONFIG);
        }
    };
    let report = match harness::run(cli.experiment, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(cli.experiment.name()));
    if let Err(e) = report.write_to(&out) {
        eprintln!("error: cannot write report to {}: {e}", out.display());
        return ExitCode::from(EXIT_INVALID_CONFIG);
    }

    println!(
        "{} ({} replications, seed {}, {:.2} s) -> {}",
        report.experiment,
        report.replications,
        report.master_seed,
        report.runtime_seconds,
        out.display()
    );
    for c in &report.checks {
        println!(
            "  {} {}: {}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if cli.check && !report.passed() {
        return ExitCode::from(EXIT_CHECK_FAILED);
    }
    ExitCode::SUCCESS
}

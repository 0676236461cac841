//! Command-line front end: `contact-lab <suite> [flags]`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use super::config::{ExperimentConfig, OUT_DIR_ENV};
use super::run_suite;
use crate::error::Result;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "contact-lab", about = "Run the contact-geometry experiment suites")]
pub struct Cli {
    /// verify-complex, verify-hodge, contact-field, solve-psi, quadratic-scaling,
    /// exp-taylor, group-ops, norms-report, comp-derivative or all
    pub suite: String,
    /// Flat `key = value` configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides the file and the environment)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid resolution N
    #[arg(long)]
    pub grid: Option<usize>,
    /// Worker threads for sample evaluation
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Cli {
    /// Defaults, then the file, then the environment for the output
    /// directory, then flags.
    pub fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        match (&self.out, std::env::var_os(OUT_DIR_ENV)) {
            (Some(out), _) => cfg.out = out.clone(),
            (None, Some(env)) if !env.is_empty() => cfg.out = PathBuf::from(env),
            _ => {}
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(grid) = self.grid {
            cfg.grid = grid;
            // An untouched default band follows the grid down to N/2 − 1.
            if cfg.band == ExperimentConfig::default().band && grid >= 4 {
                cfg.band = cfg.band.min(grid / 2 - 1);
            }
        }
        if let Some(jobs) = self.jobs {
            cfg.jobs = jobs;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses arguments, runs the suite and returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match cli.config() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if cfg.jobs > 0 {
        // A pool that is already built (repeated calls in one process) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();
    }
    match run_suite(&cli.suite, &cfg) {
        Ok(report) => {
            for check in &report.checks {
                let _ = writeln!(out, "{}", check.summary());
            }
            let _ = writeln!(
                out,
                "{} {} in {:.1} s, reports in {}",
                report.suite,
                if report.passed { "passed" } else { "FAILED" },
                report.wall_seconds,
                cfg.out.display()
            );
            if report.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

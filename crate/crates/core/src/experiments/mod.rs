//! Seeded experiment suites, their reports and the command-line runner.

mod cli;
mod config;
mod report;
mod suites;

pub use cli::{run_cli, Cli, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
pub use config::{ExperimentConfig, JKind, OUT_DIR_ENV};
pub use report::{format_sig, round_sig, Bound, CheckRecord, SuiteReport, Table, SIGNIFICANT_DIGITS};
pub use suites::SUITES;

use std::time::Instant;

use crate::error::{Error, Result};
use suites::Lab;

/// Runs one suite, or every suite for `"all"`, without writing anything.
pub fn evaluate_suite(name: &str, config: &ExperimentConfig) -> Result<SuiteReport> {
    config.validate()?;
    if name != "all" && !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.to_string()));
    }
    let start = Instant::now();
    let lab = Lab::new(config);
    let mut report = SuiteReport::new(name, config);
    if name == "all" {
        for suite in SUITES {
            let mut part = SuiteReport::new(suite, config);
            dispatch(&lab, suite, &mut part);
            report.absorb(part);
        }
    } else {
        dispatch(&lab, name, &mut report);
    }
    report.wall_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Runs a suite and writes its JSON report and CSV tables to `config.out`.
pub fn run_suite(name: &str, config: &ExperimentConfig) -> Result<SuiteReport> {
    let report = evaluate_suite(name, config)?;
    report.write(&config.out)?;
    Ok(report)
}

fn dispatch(lab: &Lab, name: &str, report: &mut SuiteReport) {
    match name {
        "verify-complex" => suites::verify_complex(lab, report),
        "verify-hodge" => suites::verify_hodge(lab, report),
        "contact-field" => suites::contact_field(lab, report),
        "solve-psi" => suites::solve_psi(lab, report),
        "quadratic-scaling" => suites::quadratic_scaling(lab, report),
        "exp-taylor" => suites::exp_taylor(lab, report),
        "group-ops" => suites::group_ops(lab, report),
        "norms-report" => suites::norms_report(lab, report),
        "comp-derivative" => suites::comp_derivative(lab, report),
        _ => unreachable!("suite names are checked before dispatch"),
    }
}

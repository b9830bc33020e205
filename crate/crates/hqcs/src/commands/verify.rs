use std::path::PathBuf;

use hqcs_core::oracle::suite::{run_suite, SuiteConfig, SuiteReport};
use hqcs_core::oracle::ZeroEigenspace;
use serde::Serialize;

use crate::error::CliResult;
use crate::output::{json_bytes, write_atomic, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
struct CheckJson {
    name: &'static str,
    evaluations: usize,
    failures: usize,
    max_deviation: Option<f64>,
    tolerance: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct VerifyJson {
    schema_version: u32,
    command: &'static str,
    dims: usize,
    per_class: usize,
    k_max: u32,
    trials: usize,
    seed: u64,
    zero_eigenspace: &'static str,
    passed: bool,
    checks: Vec<CheckJson>,
}

/// Runs the randomised oracle suite and optionally writes `verify.json`.
/// Failed checks are part of the returned report, not an error.
pub fn cmd_verify(cfg: &SuiteConfig, out: Option<&PathBuf>) -> CliResult<SuiteReport> {
    let report = run_suite(cfg)?;
    if let Some(dir) = out {
        let json = VerifyJson {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            dims: cfg.max_dim,
            per_class: cfg.per_class,
            k_max: cfg.k_max,
            trials: cfg.trials,
            seed: cfg.seed,
            zero_eigenspace: match cfg.oracle.zero_eigenspace {
                ZeroEigenspace::Positive => "positive",
                ZeroEigenspace::Excluded => "excluded",
            },
            passed: report.passed(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.id.name(),
                    evaluations: c.evaluations,
                    failures: c.failures,
                    // null when a deviation was NaN
                    max_deviation: (!c.max_deviation.is_nan()).then_some(c.max_deviation),
                    tolerance: c.id.tolerance(),
                    passed: c.passed(),
                })
                .collect(),
        };
        write_atomic(&dir.join("verify.json"), &json_bytes(&json)?)?;
    }
    Ok(report)
}

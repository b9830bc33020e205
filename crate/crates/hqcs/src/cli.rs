use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hqcs_core::oracle::suite::SuiteConfig;
use hqcs_core::oracle::{OracleConfig, ZeroEigenspace, DEFAULT_SIZE_CAP};

use crate::commands::{categorize, predict, sweep, verify};
use crate::config::{RunConfig, SharedArgs};
use crate::error::{CliError, CliResult, ExitStatus};
use crate::output::num;

#[derive(Debug, Parser)]
#[command(name = "hqcs", version, about = "Linear-time Helstrom-centroid and fidelity classifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Out-of-fold scores and F1 at one k (writes scores.csv, record.json)
    Predict {
        /// Copy count, any real k > 0
        #[arg(long)]
        k: f64,
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Cross-validated F1 over the k grid (writes sweep.csv, best.json, sweep.svg)
    Sweep {
        #[command(flatten)]
        shared: SharedArgs,
    },
    /// Randomised comparison of the fast scores against the tensor-power oracle
    Verify(VerifyArgs),
    /// Safe/borderline/rare/outlier typing (writes profile.json, types.csv)
    Categorize {
        /// Only count points of this class in the profile
        #[arg(long = "typed-class")]
        typed_class: Option<String>,
        #[command(flatten)]
        shared: SharedArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZeroSpaceArg {
    Positive,
    Excluded,
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyArgs {
    /// Largest feature dimension; dimensions are drawn from 2..=dims
    #[arg(long, default_value_t = 4)]
    pub dims: usize,
    /// Largest class size; sizes are drawn from 1..=per-class
    #[arg(long = "per-class", default_value_t = 3)]
    pub per_class: usize,
    /// Largest integer k; drawn from 1..=k-max
    #[arg(long = "k-max", default_value_t = 3)]
    pub k_max: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Largest d^k the oracle may allocate
    #[arg(long = "size-cap", default_value_t = DEFAULT_SIZE_CAP)]
    pub size_cap: usize,
    /// Sign given to the null space of the Helstrom operator
    #[arg(long = "zero-eigenspace", value_enum, default_value_t = ZeroSpaceArg::Positive)]
    pub zero_eigenspace: ZeroSpaceArg,
    /// Directory for verify.json
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl VerifyArgs {
    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            max_dim: self.dims,
            per_class: self.per_class,
            k_max: self.k_max,
            trials: self.trials,
            seed: self.seed,
            oracle: OracleConfig {
                size_cap: self.size_cap,
                zero_eigenspace: match self.zero_eigenspace {
                    ZeroSpaceArg::Positive => ZeroEigenspace::Positive,
                    ZeroSpaceArg::Excluded => ZeroEigenspace::Excluded,
                },
            },
        }
    }
}

fn warn_skipped(skipped: usize) {
    if skipped > 0 {
        eprintln!("warning: {skipped} HQCS training pairs skipped: a class-0 and a class-1 sample encode to the same state");
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Predict { k, shared } => {
            let o = predict::cmd_predict(&RunConfig::resolve(shared)?, *k)?;
            warn_skipped(o.skipped_pairs());
            for r in &o.records {
                println!("{} k={} mean F1 {:.4}", r.classifier, num(r.k), r.mean_f1);
            }
        }
        Command::Sweep { shared } => {
            let o = sweep::cmd_sweep(&RunConfig::resolve(shared)?)?;
            let r = &o.result;
            warn_skipped(r.skipped_pairs.iter().copied().max().unwrap_or(0));
            println!(
                "best HQCS: k={} F1 {:.4}; best FID: k={} F1 {:.4}",
                num(r.best_hqcs.k),
                r.best_hqcs.f1,
                num(r.best_fid.k),
                r.best_fid.f1
            );
        }
        Command::Verify(args) => {
            if args.trials == 0 {
                eprintln!("warning: 0 trials requested; verification passes vacuously");
            }
            let report = verify::cmd_verify(&args.suite_config(), args.out.as_ref())?;
            for c in &report.checks {
                println!(
                    "{:<5} {:<24} evaluations {:>5}  max deviation {:.3e}  tolerance {:.0e}",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.id.name(),
                    c.evaluations,
                    c.max_deviation,
                    c.id.tolerance()
                );
            }
            let failed = report.checks.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                return Err(CliError::VerificationFailed {
                    failed,
                    total: report.checks.len(),
                });
            }
        }
        Command::Categorize { typed_class, shared } => {
            let o = categorize::cmd_categorize(&RunConfig::resolve(shared)?, typed_class.as_deref())?;
            let p = &o.categorization.profile;
            println!(
                "{}: safe {:.1}%  borderline {:.1}%  rare {:.1}%  outlier {:.1}%  ({} points)",
                o.dataset,
                p.safe_pct,
                p.borderline_pct,
                p.rare_pct,
                p.outlier_pct,
                p.total()
            );
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and reports errors on stderr.
pub fn run<I, T>(args: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitStatus::InputError
            } else {
                ExitStatus::Success
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitStatus::Success,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_status()
        }
    }
}

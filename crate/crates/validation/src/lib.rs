//! Pass/fail bookkeeping for the workspace acceptance run.
//!
//! The criteria themselves live in `tests/acceptance.rs`; this crate only
//! formats verdicts and locates the bundled datasets.

use std::path::PathBuf;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// Failure fails the run.
    Hard,
    /// Failure is reported only.
    Soft,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub number: u32,
    pub title: &'static str,
    pub severity: Severity,
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl Verdict {
    pub fn line(&self) -> String {
        let status = match (self.passed, self.severity) {
            (true, _) => "PASS",
            (false, Severity::Hard) => "FAIL",
            (false, Severity::Soft) => "FAIL (soft)",
        };
        format!(
            "criterion {} {:<28} {:<11} [{:.2} s]",
            self.number,
            self.title,
            status,
            self.elapsed.as_secs_f64()
        )
    }

    pub fn blocks(&self) -> bool {
        !self.passed && self.severity == Severity::Hard
    }
}

/// Collects detail lines and the overall outcome of one criterion.
#[derive(Debug)]
pub struct Check {
    number: u32,
    title: &'static str,
    severity: Severity,
    started: Instant,
    passed: bool,
    details: Vec<String>,
}

impl Check {
    pub fn start(number: u32, title: &'static str, severity: Severity) -> Self {
        Self {
            number,
            title,
            severity,
            started: Instant::now(),
            passed: true,
            details: Vec::new(),
        }
    }

    /// Records a sub-check; any `false` fails the criterion.
    pub fn expect(&mut self, ok: bool, detail: impl Into<String>) {
        self.passed &= ok;
        let mark = if ok { "ok  " } else { "MISS" };
        self.details.push(format!("{mark} {}", detail.into()));
    }

    pub fn note(&mut self, detail: impl Into<String>) {
        self.details.push(format!("     {}", detail.into()));
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    /// Adds the runtime bound as a final sub-check.
    pub fn finish(mut self, limit: Duration) -> Verdict {
        let elapsed = self.started.elapsed();
        self.expect(
            elapsed <= limit,
            format!("runtime {:.2} s within {} s", elapsed.as_secs_f64(), limit.as_secs()),
        );
        Verdict {
            number: self.number,
            title: self.title,
            severity: self.severity,
            passed: self.passed,
            details: self.details,
            elapsed,
        }
    }
}

/// Workspace `data/` directory.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// `Some(path)` when `data/<name>.csv` exists.
pub fn dataset(name: &str) -> Option<PathBuf> {
    let p = data_dir().join(format!("{name}.csv"));
    p.is_file().then_some(p)
}

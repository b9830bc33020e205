//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use hqcs_core::eval::{SweepGrid, DEFAULT_FOLDS, DEFAULT_SEED};

use crate::error::{CliError, CliResult};

/// Flags shared by the dataset commands. Every field is optional so that
/// unset flags fall through to the config file and then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct SharedArgs {
    /// Plain-text `key = value` file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV file with a header row
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Label column name (default: last column)
    #[arg(long = "label-col")]
    pub label_col: Option<String>,
    /// Two label values to keep, e.g. `Iris-setosa,Iris-versicolor`
    #[arg(long = "class-pair")]
    pub class_pair: Option<String>,
    /// Label value mapped to class 0 and used as the F1 positive class
    #[arg(long)]
    pub positive: Option<String>,
    /// Comma-separated columns to treat as categorical
    #[arg(long)]
    pub categorical: Option<String>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "k-min")]
    pub k_min: Option<f64>,
    #[arg(long = "k-max")]
    pub k_max: Option<f64>,
    #[arg(long = "k-step")]
    pub k_step: Option<f64>,
    /// Output directory (created if missing)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write sweep.svg
    #[arg(long)]
    pub svg: bool,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Store wall-clock durations in JSON reports (makes reruns differ)
    #[arg(long = "record-timing")]
    pub record_timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset_path: PathBuf,
    pub label_column: Option<String>,
    pub positive_class_value: Option<String>,
    pub class_pair: Option<(String, String)>,
    pub categorical: Vec<String>,
    pub folds: usize,
    pub seed: u64,
    pub grid: SweepGrid,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub jobs: Option<usize>,
    pub record_timing: bool,
}

const KEYS: &[&str] = &[
    "data",
    "label_col",
    "class_pair",
    "positive",
    "categorical",
    "folds",
    "seed",
    "k_min",
    "k_max",
    "k_step",
    "out",
    "svg",
    "jobs",
    "record_timing",
];

/// Parsed config file, keys normalised to snake_case.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    path: String,
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        if !path.exists() {
            return Err(CliError::FileNotFound(path.to_path_buf()));
        }
        Self::parse(&path.display().to_string(), &fs::read_to_string(path)?)
    }

    pub fn parse(path: &str, text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CliError::ConfigFile {
                path: path.to_string(),
                line: line_no,
                message,
            };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(err(format!("unknown key `{key}`")));
            }
            entries.insert(key, (line_no, value.trim().to_string()));
        }
        Ok(Self {
            path: path.to_string(),
            entries,
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| CliError::ConfigFile {
                path: self.path.clone(),
                line: *line,
                message: format!("invalid value `{v}` for `{key}`"),
            }),
        }
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

pub fn parse_class_pair(s: &str) -> CliResult<(String, String)> {
    match split_list(s).as_slice() {
        [a, b] if a != b => Ok((a.clone(), b.clone())),
        _ => Err(CliError::Config(format!("class pair must be two distinct values, got `{s}`"))),
    }
}

impl RunConfig {
    /// Merges flags over the file named by `--config`, then defaults.
    pub fn resolve(args: &SharedArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::read(p)?,
            None => ConfigFile::default(),
        };
        Self::resolve_with(args, &file)
    }

    pub fn resolve_with(args: &SharedArgs, file: &ConfigFile) -> CliResult<Self> {
        let dataset_path = args
            .data
            .clone()
            .or_else(|| file.raw("data").map(PathBuf::from))
            .ok_or_else(|| CliError::Config("no dataset given (--data)".into()))?;
        let class_pair = match args.class_pair.as_deref().or(file.raw("class_pair")) {
            Some(s) => Some(parse_class_pair(s)?),
            None => None,
        };
        let categorical = args
            .categorical
            .as_deref()
            .or(file.raw("categorical"))
            .map(split_list)
            .unwrap_or_default();
        let folds = args.folds.or(file.parsed("folds")?).unwrap_or(DEFAULT_FOLDS);
        if folds < 2 {
            return Err(CliError::Config(format!("folds must be at least 2, got {folds}")));
        }
        let defaults = SweepGrid::default();
        let grid = SweepGrid::new(
            args.k_min.or(file.parsed("k_min")?).unwrap_or(defaults.k_min),
            args.k_max.or(file.parsed("k_max")?).unwrap_or(defaults.k_max),
            args.k_step.or(file.parsed("k_step")?).unwrap_or(defaults.step),
        )?;
        let jobs = args.jobs.or(file.parsed("jobs")?);
        if jobs == Some(0) {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        Ok(Self {
            dataset_path,
            label_column: args.label_col.clone().or_else(|| file.raw("label_col").map(String::from)),
            positive_class_value: args.positive.clone().or_else(|| file.raw("positive").map(String::from)),
            class_pair,
            categorical,
            folds,
            seed: args.seed.or(file.parsed("seed")?).unwrap_or(DEFAULT_SEED),
            grid,
            output_dir: args
                .out
                .clone()
                .or_else(|| file.raw("out").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(".")),
            emit_svg: args.svg || file.parsed("svg")?.unwrap_or(false),
            jobs,
            record_timing: args.record_timing || file.parsed("record_timing")?.unwrap_or(false),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> SharedArgs {
        SharedArgs {
            data: Some("d.csv".into()),
            ..SharedArgs::default()
        }
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve_with(&args(), &ConfigFile::default()).unwrap();
        assert_eq!(c.folds, 5);
        assert_eq!(c.seed, 42);
        assert_eq!(c.grid, SweepGrid::default());
        assert!(!c.emit_svg);
        assert_eq!(c.output_dir, PathBuf::from("."));
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse("run.cfg", "# comment\nfolds = 3\nseed=7\nk-step = 0.5\nsvg = true\n").unwrap();
        let mut a = args();
        a.seed = Some(9);
        let c = RunConfig::resolve_with(&a, &file).unwrap();
        assert_eq!(c.folds, 3);
        assert_eq!(c.seed, 9);
        assert_eq!(c.grid.step, 0.5);
        assert!(c.emit_svg);
    }

    #[test]
    fn data_can_come_from_file() {
        let file = ConfigFile::parse("run.cfg", "data = x.csv\nclass_pair = a, b\n").unwrap();
        let c = RunConfig::resolve_with(&SharedArgs::default(), &file).unwrap();
        assert_eq!(c.dataset_path, PathBuf::from("x.csv"));
        assert_eq!(c.class_pair, Some(("a".into(), "b".into())));
    }

    #[test]
    fn bad_entries_report_line() {
        let err = ConfigFile::parse("run.cfg", "folds = 3\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, CliError::ConfigFile { line: 2, .. }), "{err}");
        let file = ConfigFile::parse("run.cfg", "\nfolds = three\n").unwrap();
        let err = RunConfig::resolve_with(&args(), &file).unwrap_err();
        assert!(matches!(err, CliError::ConfigFile { line: 2, .. }), "{err}");
        assert!(ConfigFile::parse("run.cfg", "folds 3\n").is_err());
    }

    #[test]
    fn invariants() {
        let mut a = args();
        a.folds = Some(1);
        assert!(RunConfig::resolve_with(&a, &ConfigFile::default()).is_err());
        let mut a = args();
        a.k_min = Some(5.0);
        a.k_max = Some(1.0);
        assert!(matches!(
            RunConfig::resolve_with(&a, &ConfigFile::default()),
            Err(CliError::Core(hqcs_core::Error::InvalidGrid { .. }))
        ));
        assert!(RunConfig::resolve_with(&SharedArgs::default(), &ConfigFile::default()).is_err());
        assert!(parse_class_pair("a,a").is_err());
        assert!(parse_class_pair("a,b,c").is_err());
    }
}

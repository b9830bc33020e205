use std::path::PathBuf;
use std::time::Instant;

use hqcs_core::eval::{nonmonotonicity_check, stratified_kfold, BestEntry, NonMonotonicity, SweepResult};
use hqcs_core::{ClassifierId, Label};
use rayon::prelude::*;
use serde::Serialize;

use super::{data_options, elapsed, parallel_fold_evaluators, thread_pool};
use crate::config::RunConfig;
use crate::dataset::load_csv;
use crate::error::CliResult;
use crate::output::{csv_bytes, json_bytes, num, sweep_svg, write_atomic, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
struct GridJson {
    k_min: f64,
    k_max: f64,
    k_step: f64,
    points: usize,
}

#[derive(Debug, Serialize)]
struct BestJson {
    k: f64,
    f1_mean: f64,
    row: usize,
}

impl From<BestEntry> for BestJson {
    fn from(b: BestEntry) -> Self {
        Self {
            k: b.k,
            f1_mean: b.f1,
            row: b.index + 1,
        }
    }
}

#[derive(Debug, Serialize)]
struct WitnessJson {
    nonmonotone: bool,
    k_witness: Option<[f64; 3]>,
}

impl From<Option<NonMonotonicity>> for WitnessJson {
    fn from(w: Option<NonMonotonicity>) -> Self {
        Self {
            nonmonotone: w.is_some(),
            k_witness: w.map(|w| w.ks),
        }
    }
}

#[derive(Debug, Serialize)]
struct Pair<T> {
    hqcs: T,
    fid: T,
}

#[derive(Debug, Serialize)]
struct BestReport<'a> {
    schema_version: u32,
    command: &'static str,
    dataset: &'a str,
    positive_class: &'a str,
    folds: usize,
    seed: u64,
    grid: GridJson,
    best: Pair<BestJson>,
    shape: Pair<WitnessJson>,
    skipped_pairs: usize,
    wall_clock_seconds: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub dataset: String,
    pub result: SweepResult,
    /// `None` for a monotone curve or fewer than three grid points.
    pub hqcs_nonmonotone: Option<NonMonotonicity>,
    pub fid_nonmonotone: Option<NonMonotonicity>,
    pub files: Vec<PathBuf>,
}

fn shape(curve: &[(f64, f64)]) -> CliResult<Option<NonMonotonicity>> {
    if curve.len() < 3 {
        return Ok(None);
    }
    Ok(nonmonotonicity_check(curve)?)
}

/// Cross-validated F1 of both classifiers at every grid point. One overlap
/// cache is built per fold; grid points are then scored in parallel.
pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<SweepOutcome> {
    let start = Instant::now();
    let data = load_csv(&cfg.dataset_path, &data_options(cfg))?;
    let plan = stratified_kfold(&data.dataset, cfg.folds, cfg.seed)?;
    let points = cfg.grid.points()?;
    let pool = thread_pool(cfg.jobs)?;
    let result = pool.install(|| -> CliResult<SweepResult> {
        let folds = parallel_fold_evaluators(&data.dataset, &plan)?;
        let per_point = points
            .par_iter()
            .map(|&k| folds.iter().map(|f| f.evaluate(k, Label::Class0)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SweepResult::from_fold_scores(points.iter().map(|k| k.get()).collect(), per_point)?)
    })?;
    let skipped: usize = result.skipped_pairs.iter().sum();

    let hqcs_nonmonotone = shape(&result.curve(ClassifierId::Hqcs))?;
    let fid_nonmonotone = shape(&result.curve(ClassifierId::Fid))?;

    let folds = result.fold_count();
    let mut header: Vec<String> = vec!["k".into(), "f1_hqcs_mean".into(), "f1_fid_mean".into()];
    header.extend((1..=folds).map(|f| format!("f1_hqcs_fold{f}")));
    header.extend((1..=folds).map(|f| format!("f1_fid_fold{f}")));
    let rows = (0..result.k_grid.len()).map(|i| {
        let mut row = vec![num(result.k_grid[i]), num(result.f1_hqcs[i]), num(result.f1_fid[i])];
        row.extend(result.per_fold_hqcs[i].iter().map(|x| num(*x)));
        row.extend(result.per_fold_fid[i].iter().map(|x| num(*x)));
        row
    });
    let sweep_csv = csv_bytes(&header, rows)?;

    let report = BestReport {
        schema_version: SCHEMA_VERSION,
        command: "sweep",
        dataset: &data.id,
        positive_class: &data.class_values[0],
        folds: cfg.folds,
        seed: cfg.seed,
        grid: GridJson {
            k_min: cfg.grid.k_min,
            k_max: cfg.grid.k_max,
            k_step: cfg.grid.step,
            points: result.k_grid.len(),
        },
        best: Pair {
            hqcs: result.best_hqcs.into(),
            fid: result.best_fid.into(),
        },
        shape: Pair {
            hqcs: hqcs_nonmonotone.into(),
            fid: fid_nonmonotone.into(),
        },
        skipped_pairs: skipped,
        wall_clock_seconds: elapsed(start, cfg.record_timing),
    };

    let mut files = vec![cfg.output_dir.join("sweep.csv"), cfg.output_dir.join("best.json")];
    write_atomic(&files[0], &sweep_csv)?;
    write_atomic(&files[1], &json_bytes(&report)?)?;
    if cfg.emit_svg {
        let svg = sweep_svg(
            &result.k_grid,
            &[("HQCS", "#1f77b4", &result.f1_hqcs), ("FID", "#d62728", &result.f1_fid)],
        );
        let path = cfg.output_dir.join("sweep.svg");
        write_atomic(&path, svg.as_bytes())?;
        files.push(path);
    }
    Ok(SweepOutcome {
        dataset: data.id,
        result,
        hqcs_nonmonotone,
        fid_nonmonotone,
        files,
    })
}

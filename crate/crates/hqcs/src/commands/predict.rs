use std::path::PathBuf;
use std::time::Instant;

use hqcs_core::eval::{f1_score, stratified_kfold};
use hqcs_core::{ClassifierId, CopyCount, Label};
use rayon::prelude::*;
use serde::Serialize;

use super::{data_options, elapsed, parallel_fold_evaluators, thread_pool};
use crate::config::RunConfig;
use crate::dataset::load_csv;
use crate::error::CliResult;
use crate::output::{csv_bytes, json_bytes, num, write_atomic, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub dataset: String,
    pub classifier: String,
    pub k: f64,
    pub per_fold_f1: Vec<f64>,
    pub mean_f1: f64,
    /// Per fold; always zero for FID.
    pub skipped_pairs: Vec<usize>,
    pub wall_clock_seconds: Option<f64>,
}

#[derive(Debug, Serialize)]
struct PredictReport<'a> {
    schema_version: u32,
    command: &'static str,
    dataset: &'a str,
    rows: usize,
    positive_class: &'a str,
    negative_class: &'a str,
    folds: usize,
    seed: u64,
    records: &'a [ResultRecord],
}

/// Out-of-fold score of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRow {
    pub row_id: usize,
    pub fid_score: f64,
    pub hqcs_score: f64,
    pub fid_label: Label,
    pub hqcs_label: Label,
}

#[derive(Debug, Clone)]
pub struct PredictOutcome {
    pub records: Vec<ResultRecord>,
    pub rows: Vec<ScoredRow>,
    pub files: Vec<PathBuf>,
}

impl PredictOutcome {
    pub fn skipped_pairs(&self) -> usize {
        self.records.iter().flat_map(|r| &r.skipped_pairs).sum()
    }
}

/// Scores every sample while it is held out under stratified k-fold CV.
pub fn cmd_predict(cfg: &RunConfig, k: f64) -> CliResult<PredictOutcome> {
    let start = Instant::now();
    let k = CopyCount::new(k)?;
    let data = load_csv(&cfg.dataset_path, &data_options(cfg))?;
    let plan = stratified_kfold(&data.dataset, cfg.folds, cfg.seed)?;
    let pool = thread_pool(cfg.jobs)?;

    let folds = pool.install(|| -> CliResult<_> {
        let evaluators = parallel_fold_evaluators(&data.dataset, &plan)?;
        Ok(evaluators
            .par_iter()
            .map(|ev| Ok((ev, ev.report(ClassifierId::Hqcs, k)?, ev.report(ClassifierId::Fid, k)?)))
            .collect::<Result<Vec<_>, hqcs_core::Error>>()?
            .into_iter()
            .map(|(ev, h, f)| (ev.test_indices().to_vec(), ev.truth().to_vec(), h, f))
            .collect::<Vec<_>>())
    })?;

    let n = data.dataset.len();
    let mut rows: Vec<Option<ScoredRow>> = vec![None; n];
    let mut f1 = [Vec::new(), Vec::new()];
    let mut skipped = Vec::new();
    for (indices, truth, h, f) in &folds {
        for (j, &i) in indices.iter().enumerate() {
            rows[i] = Some(ScoredRow {
                row_id: data.row_ids[i],
                fid_score: f.scores[j],
                hqcs_score: h.scores[j],
                fid_label: f.predictions[j],
                hqcs_label: h.predictions[j],
            });
        }
        f1[0].push(f1_score(truth, &h.predictions, Label::Class0)?);
        f1[1].push(f1_score(truth, &f.predictions, Label::Class0)?);
        skipped.push(h.skipped_pairs);
    }
    let rows: Vec<ScoredRow> = rows.into_iter().flatten().collect();

    let seconds = elapsed(start, cfg.record_timing);
    let records: Vec<ResultRecord> = [ClassifierId::Hqcs, ClassifierId::Fid]
        .into_iter()
        .zip(f1)
        .map(|(id, per_fold)| ResultRecord {
            dataset: data.id.clone(),
            classifier: id.name().to_string(),
            k: k.get(),
            mean_f1: per_fold.iter().sum::<f64>() / per_fold.len() as f64,
            skipped_pairs: if id == ClassifierId::Hqcs { skipped.clone() } else { vec![0; per_fold.len()] },
            per_fold_f1: per_fold,
            wall_clock_seconds: seconds,
        })
        .collect();

    let header: Vec<String> = ["row_id", "fid_score", "hqcs_score", "fid_label", "hqcs_label"]
        .map(String::from)
        .to_vec();
    let scores_csv = csv_bytes(
        &header,
        rows.iter().map(|r| {
            vec![
                r.row_id.to_string(),
                num(r.fid_score),
                num(r.hqcs_score),
                data.class_value(r.fid_label).to_string(),
                data.class_value(r.hqcs_label).to_string(),
            ]
        }),
    )?;
    let report = PredictReport {
        schema_version: SCHEMA_VERSION,
        command: "predict",
        dataset: &data.id,
        rows: n,
        positive_class: &data.class_values[0],
        negative_class: &data.class_values[1],
        folds: cfg.folds,
        seed: cfg.seed,
        records: &records,
    };
    let scores_path = cfg.output_dir.join("scores.csv");
    let record_path = cfg.output_dir.join("record.json");
    write_atomic(&scores_path, &scores_csv)?;
    write_atomic(&record_path, &json_bytes(&report)?)?;
    Ok(PredictOutcome {
        records,
        rows,
        files: vec![scores_path, record_path],
    })
}

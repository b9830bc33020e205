use std::path::PathBuf;

use hqcs_core::difficulty::{classify_point_type, profile_for, AttributeStats, Categorization, DEFAULT_NEIGHBOURS};
use rayon::prelude::*;
use serde::Serialize;

use super::{data_options, thread_pool};
use crate::config::RunConfig;
use crate::dataset::load_difficulty_table;
use crate::error::{CliError, CliResult};
use crate::output::{csv_bytes, json_bytes, write_atomic, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
struct Counts {
    safe: usize,
    borderline: usize,
    rare: usize,
    outlier: usize,
}

#[derive(Debug, Serialize)]
struct ProfileJson<'a> {
    schema_version: u32,
    command: &'static str,
    dataset: &'a str,
    classes: &'a [String],
    typed_class: Option<&'a str>,
    neighbours: usize,
    points: usize,
    safe_pct: f64,
    borderline_pct: f64,
    rare_pct: f64,
    outlier_pct: f64,
    counts: Counts,
}

#[derive(Debug, Clone)]
pub struct CategorizeOutcome {
    pub dataset: String,
    pub class_values: Vec<String>,
    pub categorization: Categorization,
    pub files: Vec<PathBuf>,
}

/// Types every kept row from its HVDM neighbours. `typed_class` limits the
/// profile (not the neighbour search) to one class.
pub fn cmd_categorize(cfg: &RunConfig, typed_class: Option<&str>) -> CliResult<CategorizeOutcome> {
    let data = load_difficulty_table(&cfg.dataset_path, &data_options(cfg))?;
    let typed = match typed_class {
        None => None,
        Some(v) => Some(data.class_values.iter().position(|c| c == v).ok_or_else(|| CliError::UnknownClass {
            value: v.to_string(),
            known: data.class_values.clone(),
        })?),
    };
    let table = &data.table;
    let stats = AttributeStats::from_table(table);
    let types = thread_pool(cfg.jobs)?.install(|| {
        (0..table.len())
            .into_par_iter()
            .map(|i| classify_point_type(i, table, &stats, DEFAULT_NEIGHBOURS))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let categorization = profile_for(table, types, typed)?;
    let p = &categorization.profile;

    let json = ProfileJson {
        schema_version: SCHEMA_VERSION,
        command: "categorize",
        dataset: &data.id,
        classes: &data.class_values,
        typed_class,
        neighbours: DEFAULT_NEIGHBOURS,
        points: p.total(),
        safe_pct: p.safe_pct,
        borderline_pct: p.borderline_pct,
        rare_pct: p.rare_pct,
        outlier_pct: p.outlier_pct,
        counts: Counts {
            safe: p.counts[0],
            borderline: p.counts[1],
            rare: p.counts[2],
            outlier: p.counts[3],
        },
    };
    let header = ["row_id", "class", "type"].map(String::from).to_vec();
    let rows = categorization.types.iter().enumerate().map(|(i, t)| {
        vec![
            data.row_ids[i].to_string(),
            data.class_values[table.class_of(i)].clone(),
            t.name().to_string(),
        ]
    });
    let types_csv = csv_bytes(&header, rows)?;
    let files = vec![cfg.output_dir.join("profile.json"), cfg.output_dir.join("types.csv")];
    write_atomic(&files[0], &json_bytes(&json)?)?;
    write_atomic(&files[1], &types_csv)?;
    Ok(CategorizeOutcome {
        dataset: data.id,
        class_values: data.class_values,
        categorization,
        files,
    })
}

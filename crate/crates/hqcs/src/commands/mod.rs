//! One module per subcommand. Each returns its in-memory result as well as
//! writing files, so tests can check both.

pub mod categorize;
pub mod predict;
pub mod sweep;
pub mod verify;

use std::time::Instant;

use hqcs_core::eval::{FoldEvaluator, FoldPlan};
use hqcs_core::BinaryDataset;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::dataset::DataOptions;
use crate::error::CliResult;

pub(crate) fn data_options(cfg: &RunConfig) -> DataOptions {
    DataOptions {
        label_column: cfg.label_column.clone(),
        class_pair: cfg.class_pair.clone(),
        positive: cfg.positive_class_value.clone(),
        categorical: cfg.categorical.clone(),
    }
}

pub(crate) fn thread_pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

pub(crate) fn parallel_fold_evaluators(dataset: &BinaryDataset, plan: &FoldPlan) -> CliResult<Vec<FoldEvaluator>> {
    Ok((0..plan.fold_count)
        .into_par_iter()
        .map(|f| FoldEvaluator::new(dataset, plan, f))
        .collect::<Result<Vec<_>, _>>()?)
}

/// `None` unless timing was requested, so default reruns stay byte-identical.
pub(crate) fn elapsed(start: Instant, record: bool) -> Option<f64> {
    record.then(|| start.elapsed().as_secs_f64())
}

//! The experiment grid: sampling methods × sample sizes × replicates.
//!
//! Each cell draws a training sample, grows a tree on it, classifies every
//! record not in the sample and scores the predictions. Replicate seeds are
//! derived from the master seed and the cell coordinates, so output does not
//! depend on how cells are scheduled across threads.

mod config;
mod output;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cart::{grow_tree, predict_batch, TreeParams};
use crate::corpus::{split_complement, Dataset};
use crate::design::{population_priors, post_stratification_weights};
use crate::error::{Error, Result};
use crate::metrics::{confusion_matrix, kappa, mcr_class, mcr_total, MetricTriple};
use crate::sampling::{sample_srs, sample_stratified, stratified_allocation};
use crate::seed;

pub use config::{DataSource, ExperimentConfig, SizeSpec};
pub use output::{
    emit_results, emit_summary, read_results, summarize, write_results, write_summary, Metric,
    SummaryRow, SummaryTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodTag {
    /// Simple random sample, unit weights.
    Srs,
    /// Stratified sample, unit weights, sample proportions as priors.
    StratUninformed,
    /// Stratified sample with post-stratification case weights.
    StratPoststrat,
    /// Stratified sample, unit weights, population class shares as priors.
    StratPriors,
}

impl MethodTag {
    pub const ALL: [MethodTag; 4] = [
        MethodTag::Srs,
        MethodTag::StratUninformed,
        MethodTag::StratPoststrat,
        MethodTag::StratPriors,
    ];

    pub(crate) fn all_vec() -> Vec<MethodTag> {
        Self::ALL.to_vec()
    }

    pub fn name(self) -> &'static str {
        match self {
            MethodTag::Srs => "srs",
            MethodTag::StratUninformed => "strat_uninformed",
            MethodTag::StratPoststrat => "strat_poststrat",
            MethodTag::StratPriors => "strat_priors",
        }
    }

    pub fn is_stratified(self) -> bool {
        self != MethodTag::Srs
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MethodTag::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method {s:?}")))
    }
}

/// Outcome of one sample-train-evaluate cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub n_sample: usize,
    pub n_eval: usize,
    pub mcr_total: Option<f64>,
    pub mcr_class: Option<f64>,
    pub kappa: Option<f64>,
    /// `None` on success, otherwise the failure reason.
    pub failure: Option<String>,
}

impl CellResult {
    fn failed(n_sample: usize, n_eval: usize, reason: impl Into<String>) -> Self {
        CellResult {
            n_sample,
            n_eval,
            mcr_total: None,
            mcr_class: None,
            kappa: None,
            failure: Some(reason.into()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn metrics(&self) -> Option<MetricTriple> {
        Some(MetricTriple {
            mcr_total: self.mcr_total?,
            mcr_class: self.mcr_class?,
            kappa: self.kappa?,
        })
    }
}

/// Runs one cell. `size` is `n` for [`MethodTag::Srs`] and the per-class
/// target `s` for the stratified methods. Failures are reported in the
/// result, never as `Err`.
pub fn run_cell(
    data: &Dataset,
    method: MethodTag,
    size: usize,
    seed: u64,
    params: &TreeParams,
) -> CellResult {
    let n = data.len();
    let sample = match method {
        MethodTag::Srs => sample_srs(data, size, seed),
        _ => sample_stratified(data, size, seed),
    };
    let sample = match sample {
        Ok(s) => s,
        Err(e) => return CellResult::failed(0, n, format!("sampling: {e}")),
    };
    let n_sample = sample.len();
    let n_eval = n - n_sample;
    if sample.is_empty() {
        return CellResult::failed(0, n, "empty sample");
    }

    let mut params = params.clone();
    let weights = match method {
        MethodTag::Srs | MethodTag::StratUninformed => sample.weights().to_vec(),
        MethodTag::StratPoststrat => {
            match post_stratification_weights(&sample, data.labels(), &data.class_histogram()) {
                Ok(w) => w.into_inner(),
                Err(e) => return CellResult::failed(n_sample, n_eval, format!("weights: {e}")),
            }
        }
        MethodTag::StratPriors => {
            match population_priors(&data.class_histogram()) {
                Ok(p) => params.priors = Some(p),
                Err(e) => return CellResult::failed(n_sample, n_eval, format!("priors: {e}")),
            }
            sample.weights().to_vec()
        }
    };

    let train = data.select(sample.indices());
    let tree = match grow_tree(&train, &weights, &params) {
        Ok(t) => t,
        Err(e) => return CellResult::failed(n_sample, n_eval, format!("training: {e}")),
    };
    let eval = match split_complement(data, &sample) {
        Ok(d) => d,
        Err(e) => return CellResult::failed(n_sample, n_eval, format!("split: {e}")),
    };
    if eval.is_empty() {
        return CellResult::failed(n_sample, 0, "empty evaluation set");
    }
    let predicted = match predict_batch(&tree, &eval) {
        Ok(p) => p,
        Err(e) => return CellResult::failed(n_sample, n_eval, format!("prediction: {e}")),
    };
    let m = match confusion_matrix(eval.labels(), &predicted, data.n_classes()) {
        Ok(m) => m,
        Err(e) => return CellResult::failed(n_sample, n_eval, format!("scoring: {e}")),
    };
    let total = mcr_total(&m).ok();
    let class = mcr_class(&m).ok();
    match kappa(&m) {
        Ok(k) => CellResult {
            n_sample,
            n_eval,
            mcr_total: total,
            mcr_class: class,
            kappa: Some(k),
            failure: None,
        },
        Err(e) => CellResult {
            mcr_total: total,
            mcr_class: class,
            ..CellResult::failed(n_sample, n_eval, e.to_string())
        },
    }
}

/// One row of an experiment's output.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: MethodTag,
    pub size_label: String,
    pub replicate: usize,
    pub seed: u64,
    pub cell: CellResult,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
}

impl ExperimentResult {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.cell.is_ok())
    }
}

/// Seed of replicate `replicate` in cell `(method, size_label)`.
pub fn replicate_seed(master: u64, method: MethodTag, size_label: &str, replicate: usize) -> u64 {
    let s = seed::derive_str(master, method.name());
    let s = seed::derive_str(s, size_label);
    seed::derive(s, replicate as u64)
}

/// Runs the full grid with rayon's default thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with_jobs(config, 0)
}

/// Runs the full grid on `jobs` threads (0 = rayon default). Rows come out
/// ordered by (method, size, replicate) in config order regardless of `jobs`.
pub fn run_experiment_with_jobs(
    config: &ExperimentConfig,
    jobs: usize,
) -> Result<ExperimentResult> {
    config.validate()?;
    let data = config.load_data()?;
    run_grid(&data, config, jobs)
}

/// Runs the grid of `config` on an already loaded dataset.
pub fn run_grid(
    data: &Dataset,
    config: &ExperimentConfig,
    jobs: usize,
) -> Result<ExperimentResult> {
    config.validate()?;
    let hist = data.class_histogram();

    struct Job<'a> {
        method: MethodTag,
        label: &'a str,
        size: usize,
        replicate: usize,
        seed: u64,
    }
    let mut jobs_list = Vec::new();
    for &method in &config.methods {
        for spec in &config.sizes {
            let size = if method.is_stratified() {
                spec.s
            } else {
                spec.n
                    .unwrap_or_else(|| stratified_allocation(&hist, spec.s).total())
            };
            for replicate in 0..config.replicates {
                jobs_list.push(Job {
                    method,
                    label: &spec.label,
                    size,
                    replicate,
                    seed: replicate_seed(config.master_seed, method, &spec.label, replicate),
                });
            }
        }
    }

    let run = |job: &Job| ResultRow {
        method: job.method,
        size_label: job.label.to_string(),
        replicate: job.replicate,
        seed: job.seed,
        cell: run_cell(data, job.method, job.size, job.seed, &config.tree),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let rows: Vec<ResultRow> = pool.install(|| jobs_list.par_iter().map(run).collect());
    Ok(ExperimentResult { rows })
}

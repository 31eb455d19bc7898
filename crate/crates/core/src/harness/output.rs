use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{CellResult, ExperimentResult, MethodTag, ResultRow};

pub const RESULT_HEADER: [&str; 10] = [
    "method",
    "size_label",
    "replicate",
    "seed",
    "n_sample",
    "n_eval",
    "mcr_total",
    "mcr_class",
    "kappa",
    "status",
];

pub const SUMMARY_HEADER: [&str; 8] = [
    "method",
    "size_label",
    "metric",
    "mean",
    "sd",
    "min",
    "max",
    "count",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_results<W: Write>(result: &ExperimentResult, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(RESULT_HEADER)?;
    for r in &result.rows {
        let status = match &r.cell.failure {
            None => "ok".to_string(),
            Some(reason) => format!("failed: {reason}"),
        };
        wtr.write_record([
            r.method.name().to_string(),
            r.size_label.clone(),
            r.replicate.to_string(),
            r.seed.to_string(),
            r.cell.n_sample.to_string(),
            r.cell.n_eval.to_string(),
            opt(r.cell.mcr_total),
            opt(r.cell.mcr_class),
            opt(r.cell.kappa),
            status,
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<results>", e))?;
    Ok(())
}

pub fn emit_results(result: &ExperimentResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_results(result, File::create(path).map_err(|e| Error::io(path, e))?)
}

pub fn read_results<R: Read>(reader: R) -> Result<ExperimentResult> {
    let mut rdr = csv::Reader::from_reader(reader);
    if rdr.headers()?.iter().ne(RESULT_HEADER) {
        return Err(Error::MalformedResults("unexpected header".into()));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |what: &str| Error::MalformedResults(format!("line {line}: bad {what}"));
        let int = |i: usize, what: &str| rec[i].parse::<usize>().map_err(|_| bad(what));
        let float = |i: usize, what: &str| -> Result<Option<f64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                rec[i].parse().map(Some).map_err(|_| bad(what))
            }
        };
        let failure = match &rec[9] {
            "ok" => None,
            s => Some(
                s.strip_prefix("failed: ")
                    .ok_or_else(|| bad("status"))?
                    .to_string(),
            ),
        };
        rows.push(ResultRow {
            method: rec[0].parse().map_err(|_| bad("method"))?,
            size_label: rec[1].to_string(),
            replicate: int(2, "replicate")?,
            seed: rec[3].parse().map_err(|_| bad("seed"))?,
            cell: CellResult {
                n_sample: int(4, "n_sample")?,
                n_eval: int(5, "n_eval")?,
                mcr_total: float(6, "mcr_total")?,
                mcr_class: float(7, "mcr_class")?,
                kappa: float(8, "kappa")?,
                failure,
            },
        });
    }
    Ok(ExperimentResult { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    McrTotal,
    McrClass,
    Kappa,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::McrTotal, Metric::McrClass, Metric::Kappa];

    pub fn name(self) -> &'static str {
        match self {
            Metric::McrTotal => "mcr_total",
            Metric::McrClass => "mcr_class",
            Metric::Kappa => "kappa",
        }
    }

    fn of(self, cell: &CellResult) -> Option<f64> {
        match self {
            Metric::McrTotal => cell.mcr_total,
            Metric::McrClass => cell.mcr_class,
            Metric::Kappa => cell.kappa,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: MethodTag,
    pub size_label: String,
    pub metric: Metric,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single replicate.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn get(&self, method: MethodTag, size_label: &str, metric: Metric) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.size_label == size_label && r.metric == metric)
    }

    pub fn mean(&self, method: MethodTag, size_label: &str, metric: Metric) -> Option<f64> {
        self.get(method, size_label, metric).map(|r| r.mean)
    }
}

/// Per (method, size, metric) statistics over successful replicates, in
/// order of first appearance.
pub fn summarize(result: &ExperimentResult) -> Result<SummaryTable> {
    let mut order: Vec<(MethodTag, &str)> = Vec::new();
    let mut groups: HashMap<(MethodTag, &str), Vec<&CellResult>> = HashMap::new();
    for r in &result.rows {
        let key = (r.method, r.size_label.as_str());
        let entry = groups.entry(key).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        if r.cell.is_ok() {
            entry.push(&r.cell);
        }
    }
    let mut rows = Vec::new();
    for key in order {
        let cells = &groups[&key];
        if cells.is_empty() {
            log::warn!("no successful replicates for {} / {}", key.0, key.1);
            continue;
        }
        for metric in Metric::ALL {
            let values: Vec<f64> = cells.iter().filter_map(|c| metric.of(c)).collect();
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let sd = if n > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            rows.push(SummaryRow {
                method: key.0,
                size_label: key.1.to_string(),
                metric,
                mean,
                sd,
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                count: n,
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::NothingToSummarize);
    }
    Ok(SummaryTable { rows })
}

pub fn write_summary<W: Write>(summary: &SummaryTable, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(SUMMARY_HEADER)?;
    for r in &summary.rows {
        wtr.write_record([
            r.method.name().to_string(),
            r.size_label.clone(),
            r.metric.name().to_string(),
            r.mean.to_string(),
            r.sd.to_string(),
            r.min.to_string(),
            r.max.to_string(),
            r.count.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<summary>", e))?;
    Ok(())
}

pub fn emit_summary(summary: &SummaryTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_summary(summary, File::create(path).map_err(|e| Error::io(path, e))?)
}

//! Sample designs: head-of-file, simple random without replacement, and
//! per-class stratified with the half-the-class rule.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;

use crate::corpus::{ClassHistogram, Dataset};
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Design {
    Head,
    Srs,
    Stratified(usize),
    /// Indices supplied from outside (e.g. read from a sample file).
    External,
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Design::Head => f.write_str("head"),
            Design::Srs => f.write_str("srs"),
            Design::Stratified(s) => write!(f, "stratified({s})"),
            Design::External => f.write_str("external"),
        }
    }
}

/// Record indices into a dataset with per-point case weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    indices: Vec<usize>,
    weights: Vec<f64>,
    design: Design,
    seed: Option<u64>,
}

impl Sample {
    fn unit(indices: Vec<usize>, design: Design, seed: Option<u64>) -> Self {
        let weights = vec![1.0; indices.len()];
        Sample {
            indices,
            weights,
            design,
            seed,
        }
    }

    /// Wraps externally supplied indices. Weights default to 1 and must be
    /// positive. Distinctness is checked where the sample is applied.
    pub fn from_indices(indices: Vec<usize>, weights: Option<Vec<f64>>) -> Result<Self> {
        let weights = weights.unwrap_or_else(|| vec![1.0; indices.len()]);
        if weights.len() != indices.len() {
            return Err(Error::InvalidSample(format!(
                "{} weights for {} indices",
                weights.len(),
                indices.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidSample(format!("weight {w} is not positive")));
        }
        Ok(Sample {
            indices,
            weights,
            design: Design::External,
            seed: None,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn design(&self) -> Design {
        self.design
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Replaces the case weights, keeping indices and provenance.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        let checked = Sample::from_indices(std::mem::take(&mut self.indices), Some(weights))?;
        self.indices = checked.indices;
        self.weights = checked.weights;
        Ok(self)
    }

    /// Labels of the sampled records, in sample order.
    pub fn labels(&self, data: &Dataset) -> Vec<u32> {
        self.indices.iter().map(|&i| data.label(i)).collect()
    }

    /// Checks that every index is in range and appears once.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &i in &self.indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicateIndex(i));
            }
        }
        Ok(())
    }
}

/// Per-class target counts for a stratified draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub s: usize,
    pub targets: Vec<usize>,
}

impl Allocation {
    pub fn total(&self) -> usize {
        self.targets.iter().sum()
    }
}

pub fn sample_head(data: &Dataset, n: usize) -> Result<Sample> {
    check_size(data, n)?;
    Ok(Sample::unit((0..n).collect(), Design::Head, None))
}

pub fn sample_srs(data: &Dataset, n: usize, seed: u64) -> Result<Sample> {
    check_size(data, n)?;
    let mut pool: Vec<usize> = (0..data.len()).collect();
    let indices = draw_without_replacement(&mut pool, n, seed);
    Ok(Sample::unit(indices, Design::Srs, Some(seed)))
}

fn check_size(data: &Dataset, n: usize) -> Result<()> {
    if n > data.len() {
        return Err(Error::SampleTooLarge {
            requested: n,
            available: data.len(),
        });
    }
    Ok(())
}

/// Partial Fisher-Yates shuffle of `pool`, returning the first `n` positions.
fn draw_without_replacement(pool: &mut [usize], n: usize, seed: u64) -> Vec<usize> {
    let mut rng = seed::rng(seed);
    let (chosen, _) = pool.partial_shuffle(&mut rng, n);
    chosen.to_vec()
}

/// Targets `s` points per class; a class with fewer than `2s` points gets
/// `floor(N_h / 2)` instead.
pub fn stratified_allocation(hist: &ClassHistogram, s: usize) -> Allocation {
    let targets = hist
        .counts()
        .iter()
        .map(|&n_h| if n_h >= 2 * s { s } else { n_h / 2 })
        .collect();
    Allocation { s, targets }
}

/// Stratified SRS-WOR. Class `h` is drawn from its own substream seeded by
/// `derive(seed, h)`. Indices are grouped by class code.
pub fn sample_stratified(data: &Dataset, s: usize, seed: u64) -> Result<Sample> {
    if s == 0 {
        return Err(Error::InvalidSample(
            "per-class target s must be at least 1".into(),
        ));
    }
    let alloc = stratified_allocation(&data.class_histogram(), s);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); data.n_classes()];
    for (i, &l) in data.labels().iter().enumerate() {
        by_class[l as usize].push(i);
    }
    let mut indices = Vec::with_capacity(alloc.total());
    for (code, pool) in by_class.iter_mut().enumerate() {
        let a = alloc.targets[code];
        if a == 0 {
            if !pool.is_empty() {
                log::debug!(
                    "class {:?} ({} points) receives no stratified draws at s={s}",
                    data.classes()[code],
                    pool.len()
                );
            }
            continue;
        }
        indices.extend(draw_without_replacement(
            pool,
            a,
            seed::derive(seed, code as u64),
        ));
    }
    Ok(Sample::unit(indices, Design::Stratified(s), Some(seed)))
}

/// Writes `index,weight` rows.
pub fn write_sample<W: Write>(sample: &Sample, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["index", "weight"])?;
    for (i, w) in sample.indices.iter().zip(&sample.weights) {
        wtr.write_record([i.to_string(), w.to_string()])?;
    }
    wtr.flush().map_err(|e| Error::io("<sample>", e))?;
    Ok(())
}

pub fn read_sample<R: Read>(reader: R) -> Result<Sample> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut indices = Vec::new();
    let mut weights = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = || Error::InvalidSample(format!("line {line}: expected index,weight"));
        if row.len() != 2 {
            return Err(bad());
        }
        indices.push(row[0].trim().parse().map_err(|_| bad())?);
        weights.push(row[1].trim().parse().map_err(|_| bad())?);
    }
    Sample::from_indices(indices, Some(weights))
}

pub fn save_sample(sample: &Sample, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_sample(sample, File::create(path).map_err(|e| Error::io(path, e))?)
}

pub fn load_sample(path: impl AsRef<Path>) -> Result<Sample> {
    let path = path.as_ref();
    read_sample(File::open(path).map_err(|e| Error::io(path, e))?)
}

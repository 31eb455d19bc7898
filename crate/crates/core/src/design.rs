//! Corrections for non-representative samples: post-stratification case
//! weights and class prior vectors.

use crate::corpus::ClassHistogram;
use crate::error::{Error, Result};
use crate::sampling::Sample;

const PRIOR_SUM_TOL: f64 = 1e-12;

/// Class probabilities indexed by class code.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorVector(Vec<f64>);

impl PriorVector {
    pub fn new(priors: Vec<f64>) -> Result<Self> {
        if priors.is_empty() {
            return Err(Error::InvalidPriors("no classes".into()));
        }
        if let Some(p) = priors.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidPriors(format!(
                "entry {p} is negative or not finite"
            )));
        }
        let sum: f64 = priors.iter().sum();
        if (sum - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidPriors(format!("entries sum to {sum}")));
        }
        Ok(PriorVector(priors))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, code: u32) -> f64 {
        self.0[code as usize]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Case weights aligned to a sample's index order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&Sample> for WeightVector {
    fn from(sample: &Sample) -> Self {
        WeightVector(sample.weights().to_vec())
    }
}

/// Expansion weights `N_h / n_h`: each sampled point stands for the
/// population points of its class it was drawn to represent.
///
/// `data_labels` holds the label of every record of the source dataset.
pub fn post_stratification_weights(
    sample: &Sample,
    data_labels: &[u32],
    population: &ClassHistogram,
) -> Result<WeightVector> {
    let k = population.n_classes();
    let mut sampled = vec![0usize; k];
    for &i in sample.indices() {
        let l = *data_labels.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: data_labels.len(),
        })?;
        if l as usize >= k {
            return Err(Error::UnknownCode(l));
        }
        sampled[l as usize] += 1;
    }
    for (code, &n_h) in sampled.iter().enumerate() {
        if n_h > 0 && population.count(code as u32) == 0 {
            return Err(Error::EmptyStratum(population.classes()[code].clone()));
        }
    }
    let absent: Vec<&str> = (0..k)
        .filter(|&c| sampled[c] == 0 && population.counts()[c] > 0)
        .map(|c| population.classes()[c].as_str())
        .collect();
    if !absent.is_empty() {
        log::debug!("classes absent from sample get no weight: {absent:?}");
    }
    let weights = sample
        .indices()
        .iter()
        .map(|&i| {
            let l = data_labels[i] as usize;
            population.counts()[l] as f64 / sampled[l] as f64
        })
        .collect();
    Ok(WeightVector(weights))
}

/// `N_h / N` for every class of the histogram.
pub fn population_priors(hist: &ClassHistogram) -> Result<PriorVector> {
    if hist.total() == 0 {
        return Err(Error::EmptyHistogram);
    }
    let n = hist.total() as f64;
    PriorVector::new(hist.counts().iter().map(|&c| c as f64 / n).collect())
}

/// Weighted class shares of the sample over `n_classes` classes.
pub fn empirical_priors(
    sample: &Sample,
    data_labels: &[u32],
    weights: &WeightVector,
    n_classes: usize,
) -> Result<PriorVector> {
    if sample.is_empty() {
        return Err(Error::InvalidSample(
            "empty sample has no class shares".into(),
        ));
    }
    if weights.len() != sample.len() {
        return Err(Error::InvalidSample(format!(
            "{} weights for {} sampled points",
            weights.len(),
            sample.len()
        )));
    }
    let mut mass = vec![0.0; n_classes];
    for (&i, &w) in sample.indices().iter().zip(weights.as_slice()) {
        let l = *data_labels.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: data_labels.len(),
        })? as usize;
        if l >= n_classes {
            return Err(Error::UnknownCode(l as u32));
        }
        mass[l] += w;
    }
    let total: f64 = mass.iter().sum();
    PriorVector::new(mass.into_iter().map(|m| m / total).collect())
}

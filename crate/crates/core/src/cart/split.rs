use crate::corpus::Dataset;
use crate::error::{Error, Result};

use super::{node_risk, TreeParams, GAIN_EPS};

/// A candidate gain must beat the incumbent by more than this to replace it,
/// so floating-point noise cannot reorder exact ties.
const TIE_EPS: f64 = 1e-12;

/// The best univariate split found at a node.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    /// Points with `value < threshold` go left.
    pub threshold: f64,
    pub impurity_decrease: f64,
    pub left_counts: Vec<f64>,
    pub right_counts: Vec<f64>,
    pub left_n: usize,
    pub right_n: usize,
}

/// Training set bound to growth parameters, with the per-class multipliers
/// `π_j / W_j` precomputed.
#[derive(Debug)]
pub struct SplitSearch<'a> {
    pub(super) data: &'a Dataset,
    pub(super) weights: &'a [f64],
    pub(super) params: &'a TreeParams,
    pub(super) totals: Vec<f64>,
    pub(super) scale: Vec<f64>,
}

impl<'a> SplitSearch<'a> {
    pub fn new(data: &'a Dataset, weights: &'a [f64], params: &'a TreeParams) -> Result<Self> {
        params.validate()?;
        if data.is_empty() {
            return Err(Error::EmptyTraining);
        }
        if weights.len() != data.len() {
            return Err(Error::InvalidSample(format!(
                "{} weights for {} training points",
                weights.len(),
                data.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidSample(format!(
                "case weight {w} is not positive"
            )));
        }
        let k = data.n_classes();
        let mut totals = vec![0.0; k];
        for (&l, &w) in data.labels().iter().zip(weights) {
            totals[l as usize] += w;
        }
        let scale = match &params.priors {
            None => {
                let total: f64 = totals.iter().sum();
                totals
                    .iter()
                    .map(|&t| if t > 0.0 { 1.0 / total } else { 0.0 })
                    .collect()
            }
            Some(priors) => {
                if priors.len() != k {
                    return Err(Error::InvalidPriors(format!(
                        "{} priors for {k} classes",
                        priors.len()
                    )));
                }
                // Renormalize over the classes present in training so the root has mass 1.
                let mut present = 0.0;
                for (j, &t) in totals.iter().enumerate() {
                    if t > 0.0 {
                        if priors.as_slice()[j] <= 0.0 {
                            return Err(Error::InvalidPriors(format!(
                                "class {:?} is in the training set but has prior 0",
                                data.classes()[j]
                            )));
                        }
                        present += priors.as_slice()[j];
                    }
                }
                totals
                    .iter()
                    .zip(priors.as_slice())
                    .map(|(&t, &p)| if t > 0.0 { p / present / t } else { 0.0 })
                    .collect()
            }
        };
        Ok(SplitSearch {
            data,
            weights,
            params,
            totals,
            scale,
        })
    }

    /// Weighted class totals of the training set.
    pub fn class_totals(&self) -> &[f64] {
        &self.totals
    }

    pub fn root_risk(&self) -> f64 {
        node_risk(&self.totals, &self.scale)
    }

    pub(super) fn node_counts(&self, node: &[usize]) -> (Vec<f64>, Vec<usize>) {
        let k = self.data.n_classes();
        let mut w = vec![0.0; k];
        let mut n = vec![0usize; k];
        for &i in node {
            let l = self.data.label(i) as usize;
            w[l] += self.weights[i];
            n[l] += 1;
        }
        (w, n)
    }

    /// Exhaustive search over features and midpoints between consecutive
    /// distinct values. Ties keep the lowest feature, then the lowest threshold.
    pub fn best_split(&self, node: &[usize]) -> Option<SplitCandidate> {
        let p = self.params;
        if node.len() < p.min_split || node.len() < 2 * p.min_bucket {
            return None;
        }
        let k = self.data.n_classes();
        let (node_w, node_n) = self.node_counts(node);
        let parent_risk = node_risk(&node_w, &self.scale);
        if parent_risk <= 0.0 {
            return None;
        }

        let n = node.len();
        let mut best: Option<SplitCandidate> = None;
        let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(n);
        let mut left_w = vec![0.0; k];
        let mut left_n = vec![0usize; k];
        let mut right_w = vec![0.0; k];

        for f in 0..self.data.dimensionality() {
            sorted.clear();
            sorted.extend(node.iter().map(|&i| (self.data.features(i)[f], i)));
            sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if sorted[0].0 == sorted[n - 1].0 {
                continue;
            }
            left_w.iter_mut().for_each(|x| *x = 0.0);
            left_n.iter_mut().for_each(|x| *x = 0);

            for pos in 0..n - 1 {
                let (v, i) = sorted[pos];
                let l = self.data.label(i) as usize;
                left_w[l] += self.weights[i];
                left_n[l] += 1;

                let next = sorted[pos + 1].0;
                let n_left = pos + 1;
                if v == next || n_left < p.min_bucket {
                    continue;
                }
                if n - n_left < p.min_bucket {
                    break;
                }
                for j in 0..k {
                    right_w[j] = if node_n[j] == left_n[j] {
                        0.0
                    } else {
                        node_w[j] - left_w[j]
                    };
                }
                let gain = parent_risk
                    - node_risk(&left_w, &self.scale)
                    - node_risk(&right_w, &self.scale);
                let better = match &best {
                    None => gain > GAIN_EPS,
                    Some(b) => gain > b.impurity_decrease + TIE_EPS,
                };
                if better {
                    best = Some(SplitCandidate {
                        feature: f,
                        threshold: midpoint(v, next),
                        impurity_decrease: gain,
                        left_counts: left_w.clone(),
                        right_counts: right_w.clone(),
                        left_n: n_left,
                        right_n: n - n_left,
                    });
                }
            }
        }
        best
    }
}

/// Midpoint of `lo < hi`, nudged to `hi` when rounding would land on `lo`.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * lo + 0.5 * hi;
    if mid > lo {
        mid
    } else {
        hi
    }
}

/// Best split of the whole training set (the root node).
pub fn best_split(
    data: &Dataset,
    weights: &[f64],
    params: &TreeParams,
) -> Result<Option<SplitCandidate>> {
    let search = SplitSearch::new(data, weights, params)?;
    let all: Vec<usize> = (0..data.len()).collect();
    Ok(search.best_split(&all))
}

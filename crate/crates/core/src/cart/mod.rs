//! Binary classification trees grown with the Gini criterion.
//!
//! Class probabilities at a node follow the altered-priors form
//!
//! ```text
//! p(j | t) ∝ π_j · w_j(t) / W_j
//! ```
//!
//! where `w_j(t)` is the case weight of class `j` reaching node `t`, `W_j` the
//! class's total training weight and `π_j` its prior. Without explicit priors
//! `π_j = W_j / W`, which reduces to weighted node proportions. Because only
//! the ratios `w_j(t) / W_j` enter, growth is invariant to rescaling all case
//! weights by a constant.
//!
//! A split is scored by the decrease in prior-weighted risk
//! `p(t)·g(t) − p(t_L)·g(t_L) − p(t_R)·g(t_R)`, with `p(t) = Σ_j π_j w_j(t)/W_j`
//! and `g` the Gini impurity of `p(·|t)`. The root has `p = 1`.

mod io;
mod split;
mod tree;

use serde::{Deserialize, Serialize};

use crate::design::PriorVector;
use crate::error::{Error, Result};

pub use io::{read_tree, write_tree};
pub use split::{best_split, SplitCandidate, SplitSearch};
pub use tree::{grow_tree, predict, predict_batch, Node, NodeKind, Tree};

/// Gains at or below this are treated as no improvement.
pub const GAIN_EPS: f64 = 1e-12;

const PROB_SUM_TOL: f64 = 1e-9;

/// Growth controls. Defaults follow the usual recursive-partitioning
/// defaults (`cp = 0.01`, `minsplit = 20`, `minbucket = 7`, `maxdepth = 30`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    /// Minimum number of points in a node for a split to be attempted.
    pub min_split: usize,
    /// Minimum number of points in each child.
    pub min_bucket: usize,
    /// Nodes at this depth (root = 0) are not split.
    pub max_depth: usize,
    /// A split is kept only if its gain is at least `cp` times the root risk.
    pub cp: f64,
    #[serde(skip)]
    pub priors: Option<PriorVector>,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            min_split: 20,
            min_bucket: 7,
            max_depth: 30,
            cp: 0.01,
            priors: None,
        }
    }
}

impl TreeParams {
    /// No pre-pruning beyond single-point leaves.
    pub fn unrestricted() -> Self {
        TreeParams {
            min_split: 2,
            min_bucket: 1,
            max_depth: 30,
            cp: 0.0,
            priors: None,
        }
    }

    pub fn with_priors(mut self, priors: PriorVector) -> Self {
        self.priors = Some(priors);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if self.min_bucket < 1 {
            return bad("min_bucket must be at least 1");
        }
        if self.min_split < 2 * self.min_bucket {
            return bad("min_split must be at least 2 * min_bucket");
        }
        if self.max_depth < 1 {
            return bad("max_depth must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.cp) {
            return bad("cp must lie in [0, 1]");
        }
        Ok(())
    }
}

/// `1 − Σ p_j²` of a probability vector.
pub fn gini_impurity(probs: &[f64]) -> Result<f64> {
    let sum: f64 = probs.iter().sum();
    if probs.iter().any(|p| p.is_nan() || *p < 0.0) || (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::NotNormalized(sum));
    }
    Ok(gini_unchecked(probs))
}

pub(crate) fn gini_unchecked(probs: &[f64]) -> f64 {
    1.0 - probs.iter().map(|p| p * p).sum::<f64>()
}

/// Prior-adjusted class probabilities of a node from its weighted class
/// counts and the class totals of the training set. Classes with zero
/// training total get probability 0.
pub fn node_class_probs(
    node_counts: &[f64],
    class_totals: &[f64],
    priors: &PriorVector,
) -> Result<Vec<f64>> {
    if node_counts.len() != class_totals.len() || priors.len() != class_totals.len() {
        return Err(Error::InvalidPriors(format!(
            "{} node counts, {} class totals, {} priors",
            node_counts.len(),
            class_totals.len(),
            priors.len()
        )));
    }
    let scale: Vec<f64> = class_totals
        .iter()
        .zip(priors.as_slice())
        .map(|(&t, &p)| if t > 0.0 { p / t } else { 0.0 })
        .collect();
    let (probs, mass) = scaled_probs(node_counts, &scale);
    if mass > 0.0 {
        Ok(probs)
    } else {
        Err(Error::EmptyNode)
    }
}

/// Returns `(p(·|t), p(t))` for per-class multipliers `scale`.
pub(crate) fn scaled_probs(counts: &[f64], scale: &[f64]) -> (Vec<f64>, f64) {
    let joint: Vec<f64> = counts.iter().zip(scale).map(|(&c, &s)| c * s).collect();
    let mass: f64 = joint.iter().sum();
    if mass > 0.0 {
        (joint.iter().map(|&j| j / mass).collect(), mass)
    } else {
        (vec![0.0; counts.len()], 0.0)
    }
}

/// `p(t) · g(t)` for per-class multipliers `scale`.
pub(crate) fn node_risk(counts: &[f64], scale: &[f64]) -> f64 {
    let mass: f64 = counts.iter().zip(scale).map(|(&c, &s)| c * s).sum();
    if mass <= 0.0 {
        return 0.0;
    }
    let sq: f64 = counts
        .iter()
        .zip(scale)
        .map(|(&c, &s)| {
            let p = c * s / mass;
            p * p
        })
        .sum();
    mass * (1.0 - sq)
}

/// Lowest class code among the maxima.
pub(crate) fn argmax(probs: &[f64]) -> u32 {
    let mut best = 0;
    for (j, &p) in probs.iter().enumerate() {
        if p > probs[best] {
            best = j;
        }
    }
    best as u32
}

//! Sampling-design experiments for CART classifiers.
//!
//! The crate measures how the way a training sample is drawn from a
//! heavily class-skewed point corpus changes the accuracy of a CART
//! classifier that is then applied to the rest of the corpus. It bundles:
//!
//! * [`corpus`]: labeled point datasets, CSV I/O and a synthetic generator,
//! * [`sampling`]: head-of-file, simple random and per-class stratified designs,
//! * [`design`]: post-stratification weights and class prior vectors,
//! * [`cart`]: Gini classification trees with case weights and altered priors,
//! * [`metrics`]: confusion matrices, total/per-class misclassification, kappa,
//! * [`harness`]: the method × size × replicate experiment grid.

pub mod cart;
pub mod corpus;
pub mod design;
mod error;
pub mod harness;
pub mod metrics;
pub mod sampling;
pub mod seed;

pub use cart::{grow_tree, predict, predict_batch, Tree, TreeParams};
pub use corpus::{ClassHistogram, Dataset, PointRecord, SynthSpec};
pub use design::{PriorVector, WeightVector};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, ExperimentResult, MethodTag};
pub use metrics::{ConfusionMatrix, MetricTriple};
pub use sampling::{Allocation, Design, Sample};

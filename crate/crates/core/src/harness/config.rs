use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cart::TreeParams;
use crate::corpus::{load_points, synthesize, Dataset, PointSchema, SynthSpec};
use crate::error::{Error, Result};

use super::MethodTag;

/// Where an experiment's points come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    /// A point CSV (`f1,...,fd,class`).
    Points { path: PathBuf },
    /// A synthetic spec file; `seed` defaults to the master seed.
    Synth {
        spec: PathBuf,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// The built-in reference-proportion fixture.
    Reference {
        total: usize,
        dimensionality: usize,
        overlap: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
}

/// One column of the size grid. Stratified methods draw `s` points per
/// class; `srs` draws the stratified total `Σ a_h` unless `n` is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSpec {
    pub label: String,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "MethodTag::all_vec")]
    pub methods: Vec<MethodTag>,
    pub data: DataSource,
    pub sizes: Vec<SizeSpec>,
    #[serde(default)]
    pub tree: TreeParams,
}

fn default_replicates() -> usize {
    50
}

impl ExperimentConfig {
    /// The reference grid on the default synthetic fixture.
    pub fn reference_default() -> Self {
        let sizes = [
            ("S1", 5000),
            ("S2", 4000),
            ("S3", 3000),
            ("S4", 2000),
            ("S5", 1000),
            ("S6", 200),
            ("S7", 50),
            ("S8", 25),
        ]
        .into_iter()
        .map(|(label, s)| SizeSpec {
            label: label.into(),
            s,
            n: None,
        })
        .collect();
        ExperimentConfig {
            master_seed: 20_240_101,
            replicates: default_replicates(),
            methods: MethodTag::all_vec(),
            data: DataSource::Reference {
                total: 100_000,
                dimensionality: 6,
                overlap: 0.3,
                seed: None,
            },
            sizes,
            tree: TreeParams::default(),
        }
    }

    /// Keeps only the `count` grid entries with the smallest `s`.
    pub fn smallest_sizes(mut self, count: usize) -> Self {
        let mut order: Vec<usize> = (0..self.sizes.len()).collect();
        order.sort_by_key(|&i| self.sizes[i].s);
        let keep: Vec<usize> = order.into_iter().take(count).collect();
        self.sizes = self
            .sizes
            .into_iter()
            .enumerate()
            .filter(|(i, _)| keep.contains(i))
            .map(|(_, s)| s)
            .collect();
        self
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative data paths resolve against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        match &mut cfg.data {
            DataSource::Points { path } | DataSource::Synth { spec: path, .. } => {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
            DataSource::Reference { .. } => {}
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.replicates < 1 {
            return bad("replicates must be at least 1");
        }
        if self.sizes.is_empty() {
            return bad("size grid is empty");
        }
        if self.methods.is_empty() {
            return bad("no methods selected");
        }
        if self.sizes.iter().any(|s| s.s == 0) {
            return bad("per-class size s must be at least 1");
        }
        let mut labels: Vec<&str> = self.sizes.iter().map(|s| s.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return bad("duplicate size label");
        }
        let mut methods = self.methods.clone();
        methods.sort_unstable();
        methods.dedup();
        if methods.len() != self.methods.len() {
            return bad("duplicate method");
        }
        self.tree.validate()
    }

    pub fn load_data(&self) -> Result<Dataset> {
        match &self.data {
            DataSource::Points { path } => load_points(path, &PointSchema::default()),
            DataSource::Synth { spec, seed } => {
                synthesize(&SynthSpec::load(spec)?, seed.unwrap_or(self.master_seed))
            }
            DataSource::Reference {
                total,
                dimensionality,
                overlap,
                seed,
            } => synthesize(
                &SynthSpec::reference(*total, *dimensionality, *overlap)?,
                seed.unwrap_or(self.master_seed),
            ),
        }
    }
}

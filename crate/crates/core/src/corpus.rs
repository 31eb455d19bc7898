//! Labeled point datasets: storage, CSV I/O, class histograms and the
//! synthetic generator used in place of surveyed point clouds.
//!
//! Labels are dense `u32` codes into the dataset's class universe. Features
//! are stored row-major in one flat buffer.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::Sample;
use crate::seed;

/// Ground-cover class frequencies of the surveyed reference corpus
/// (2,872,488 points over 17 classes).
pub const REFERENCE_COUNTS: [(&str, usize); 17] = [
    ("undefined", 959),
    ("ground", 2_401_914),
    ("gravel", 1_903),
    ("asphalt", 20_301),
    ("deciduous forest", 175_103),
    ("building roofs", 1_383),
    ("walls/buildings", 13),
    ("water", 61_362),
    ("cars and other moving objects", 3_912),
    ("temporary objects", 1_411),
    ("bridges", 173_774),
    ("power poles", 231),
    ("bridge cables", 16_240),
    ("road protection fence", 11_169),
    ("bridges construction", 1_819),
    ("cement/concrete", 936),
    ("error class", 58),
];

/// Fixed seed for the class-center layout of [`SynthSpec::reference`].
const REFERENCE_LAYOUT_SEED: u64 = 0x7ab1_e001;
/// Half-width of the cube the default class centers are drawn from.
const REFERENCE_CENTER_RANGE: f64 = 2.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub features: Vec<f64>,
    pub label: u32,
}

impl PointRecord {
    pub fn new(features: Vec<f64>, label: u32) -> Self {
        PointRecord { features, label }
    }
}

/// An immutable labeled point set over a fixed class universe.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    classes: Vec<String>,
    feature_names: Vec<String>,
    features: Vec<f64>,
    labels: Vec<u32>,
}

impl Dataset {
    /// Builds a dataset with default feature names `f1..fd`.
    pub fn from_records(
        classes: Vec<String>,
        dimensionality: usize,
        records: impl IntoIterator<Item = PointRecord>,
    ) -> Result<Self> {
        let names = (1..=dimensionality).map(|i| format!("f{i}")).collect();
        Self::with_feature_names(classes, names, records)
    }

    pub fn with_feature_names(
        classes: Vec<String>,
        feature_names: Vec<String>,
        records: impl IntoIterator<Item = PointRecord>,
    ) -> Result<Self> {
        check_universe(&classes)?;
        let dim = feature_names.len();
        if dim == 0 {
            return Err(Error::InvalidDataset(
                "dimensionality must be at least 1".into(),
            ));
        }
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (i, rec) in records.into_iter().enumerate() {
            if rec.features.len() != dim {
                return Err(Error::InvalidDataset(format!(
                    "record {i} has {} features, expected {dim}",
                    rec.features.len()
                )));
            }
            if rec.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "record {i} has a non-finite feature"
                )));
            }
            if rec.label as usize >= classes.len() {
                return Err(Error::UnknownCode(rec.label));
            }
            features.extend_from_slice(&rec.features);
            labels.push(rec.label);
        }
        Ok(Dataset {
            classes,
            feature_names,
            features,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dimensionality(&self) -> usize {
        self.feature_names.len()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_code(&self, name: &str) -> Option<u32> {
        self.classes
            .iter()
            .position(|c| c == name)
            .map(|p| p as u32)
    }

    pub fn features(&self, index: usize) -> &[f64] {
        let d = self.dimensionality();
        &self.features[index * d..(index + 1) * d]
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn record(&self, index: usize) -> PointRecord {
        PointRecord::new(self.features(index).to_vec(), self.labels[index])
    }

    /// Iterates `(features, label)` pairs in record order.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], u32)> + '_ {
        self.features
            .chunks_exact(self.dimensionality())
            .zip(self.labels.iter().copied())
    }

    pub fn class_histogram(&self) -> ClassHistogram {
        class_histogram(self)
    }

    /// Copies the records at `indices`, in that order. Indices must be valid.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        let d = self.dimensionality();
        let mut features = Vec::with_capacity(indices.len() * d);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.features(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            classes: self.classes.clone(),
            feature_names: self.feature_names.clone(),
            features,
            labels,
        }
    }
}

fn check_universe(classes: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for c in classes {
        if !seen.insert(c.as_str()) {
            return Err(Error::DuplicateClass(c.clone()));
        }
    }
    Ok(())
}

/// Per-class record counts over a class universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassHistogram {
    classes: Vec<String>,
    counts: Vec<usize>,
    total: usize,
}

impl ClassHistogram {
    pub fn new(classes: Vec<String>, counts: Vec<usize>) -> Result<Self> {
        if classes.len() != counts.len() {
            return Err(Error::InvalidDataset(format!(
                "{} class names for {} counts",
                classes.len(),
                counts.len()
            )));
        }
        check_universe(&classes)?;
        let total = counts.iter().sum();
        Ok(ClassHistogram {
            classes,
            counts,
            total,
        })
    }

    /// The reference 17-class frequency table.
    pub fn reference() -> Self {
        let (names, counts) = REFERENCE_COUNTS
            .iter()
            .map(|&(n, c)| (n.to_string(), c))
            .unzip();
        ClassHistogram::new(names, counts).expect("static table is valid")
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, code: u32) -> usize {
        self.counts[code as usize]
    }

    pub fn count_of(&self, name: &str) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c == name)
            .map(|i| self.counts[i])
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Rescales the counts to sum to `total` using largest-remainder rounding.
    pub fn scaled_to(&self, total: usize) -> Result<Self> {
        if self.total == 0 {
            return Err(Error::EmptyHistogram);
        }
        let counts = largest_remainder(&self.counts, total);
        ClassHistogram::new(self.classes.clone(), counts)
    }
}

/// Apportions `total` proportionally to `weights` so the parts sum exactly.
/// Ties in the fractional remainder go to the lower index.
fn largest_remainder(weights: &[usize], total: usize) -> Vec<usize> {
    let sum: u128 = weights.iter().map(|&w| w as u128).sum();
    let mut parts = Vec::with_capacity(weights.len());
    let mut rems = Vec::with_capacity(weights.len());
    for (i, &w) in weights.iter().enumerate() {
        let num = w as u128 * total as u128;
        parts.push((num / sum) as usize);
        rems.push((num % sum, i));
    }
    let assigned: usize = parts.iter().sum();
    rems.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in rems.iter().take(total - assigned) {
        parts[i] += 1;
    }
    parts
}

pub fn class_histogram(data: &Dataset) -> ClassHistogram {
    let mut counts = vec![0usize; data.n_classes()];
    for &l in data.labels() {
        counts[l as usize] += 1;
    }
    ClassHistogram {
        classes: data.classes.clone(),
        counts,
        total: data.len(),
    }
}

/// Returns the records not indexed by `sample`, in original order.
pub fn split_complement(data: &Dataset, sample: &Sample) -> Result<Dataset> {
    let mut taken = vec![false; data.len()];
    for &i in sample.indices() {
        if i >= data.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: data.len(),
            });
        }
        if std::mem::replace(&mut taken[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    let keep: Vec<usize> = (0..data.len()).filter(|&i| !taken[i]).collect();
    Ok(data.select(&keep))
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthClass {
    pub name: String,
    pub count: usize,
    pub center: Vec<f64>,
    pub spread: f64,
}

/// Parameters of a synthetic labeled corpus: one isotropic Gaussian blob per
/// class with an exact point count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub dimensionality: usize,
    /// 0 keeps the configured centers, 1 collapses every center onto their mean.
    pub overlap: f64,
    pub classes: Vec<SynthClass>,
}

impl SynthSpec {
    /// The default fixture: reference class proportions scaled to `total`
    /// points, centers drawn once from a fixed layout seed, unit spread.
    pub fn reference(total: usize, dimensionality: usize, overlap: f64) -> Result<Self> {
        let hist = ClassHistogram::reference().scaled_to(total)?;
        let mut rng = seed::rng(REFERENCE_LAYOUT_SEED);
        let classes = hist
            .classes()
            .iter()
            .zip(hist.counts())
            .map(|(name, &count)| SynthClass {
                name: name.clone(),
                count,
                center: (0..dimensionality)
                    .map(|_| {
                        rand::Rng::random_range(
                            &mut rng,
                            -REFERENCE_CENTER_RANGE..REFERENCE_CENTER_RANGE,
                        )
                    })
                    .collect(),
                spread: 1.0,
            })
            .collect();
        let spec = SynthSpec {
            dimensionality,
            overlap,
            classes,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: SynthSpec =
            toml::from_str(text).map_err(|e| Error::InvalidSynthSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("synth spec serializes")
    }

    pub fn class_counts(&self) -> ClassHistogram {
        ClassHistogram {
            classes: self.classes.iter().map(|c| c.name.clone()).collect(),
            counts: self.classes.iter().map(|c| c.count).collect(),
            total: self.classes.iter().map(|c| c.count).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSynthSpec(m));
        if self.dimensionality == 0 {
            return bad("dimensionality must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.overlap) {
            return bad(format!("overlap {} outside [0, 1]", self.overlap));
        }
        if self.classes.is_empty() {
            return bad("no classes".into());
        }
        let mut seen = HashSet::new();
        for c in &self.classes {
            if !seen.insert(c.name.as_str()) {
                return bad(format!("class {:?} listed twice", c.name));
            }
            if c.center.len() != self.dimensionality {
                return bad(format!(
                    "class {:?} center has {} coordinates, expected {}",
                    c.name,
                    c.center.len(),
                    self.dimensionality
                ));
            }
            if c.center.iter().any(|v| !v.is_finite()) {
                return bad(format!("class {:?} center is not finite", c.name));
            }
            if !(c.spread > 0.0 && c.spread.is_finite()) {
                return bad(format!("class {:?} spread must be positive", c.name));
            }
        }
        Ok(())
    }

    /// Class centers after pulling each toward the mean center by `overlap`.
    pub fn effective_centers(&self) -> Vec<Vec<f64>> {
        let k = self.classes.len() as f64;
        let mean: Vec<f64> = (0..self.dimensionality)
            .map(|j| self.classes.iter().map(|c| c.center[j]).sum::<f64>() / k)
            .collect();
        self.classes
            .iter()
            .map(|c| {
                c.center
                    .iter()
                    .zip(&mean)
                    .map(|(&x, &m)| (1.0 - self.overlap) * x + self.overlap * m)
                    .collect()
            })
            .collect()
    }
}

/// Generates a corpus whose class histogram equals `spec`'s counts exactly.
/// Record order is a seeded shuffle of the labels.
pub fn synthesize(spec: &SynthSpec, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    let total: usize = spec.classes.iter().map(|c| c.count).sum();
    if total == 0 {
        return Err(Error::InvalidSynthSpec("total count is zero".into()));
    }
    let mut rng = seed::rng(seed);
    let mut labels: Vec<u32> = spec
        .classes
        .iter()
        .enumerate()
        .flat_map(|(code, c)| std::iter::repeat_n(code as u32, c.count))
        .collect();
    labels.shuffle(&mut rng);

    let centers = spec.effective_centers();
    let d = spec.dimensionality;
    let mut features = Vec::with_capacity(total * d);
    for &l in &labels {
        let class = &spec.classes[l as usize];
        for &c in &centers[l as usize] {
            let z: f64 = StandardNormal.sample(&mut rng);
            features.push(c + class.spread * z);
        }
    }
    Ok(Dataset {
        classes: spec.classes.iter().map(|c| c.name.clone()).collect(),
        feature_names: (1..=d).map(|i| format!("f{i}")).collect(),
        features,
        labels,
    })
}

// ---------------------------------------------------------------------------
// CSV point files
// ---------------------------------------------------------------------------

/// Column layout of a point file.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSchema {
    pub label_column: String,
    /// When set, labels outside this list are rejected and codes follow its order.
    pub universe: Option<Vec<String>>,
}

impl Default for PointSchema {
    fn default() -> Self {
        PointSchema {
            label_column: "class".into(),
            universe: None,
        }
    }
}

impl PointSchema {
    pub fn with_universe(universe: Vec<String>) -> Self {
        PointSchema {
            universe: Some(universe),
            ..Default::default()
        }
    }
}

pub fn load_points(path: impl AsRef<Path>, schema: &PointSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_points(file, schema)
}

pub fn read_points<R: Read>(reader: R, schema: &PointSchema) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::EmptyFile);
    }
    let label_col = header
        .iter()
        .position(|h| h == schema.label_column)
        .ok_or_else(|| Error::BadHeader(schema.label_column.clone()))?;
    if header.len() < 2 {
        return Err(Error::BadHeader(schema.label_column.clone()));
    }
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_col)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut known: HashMap<String, u32> = HashMap::new();
    if let Some(u) = &schema.universe {
        check_universe(u)?;
        known.extend(u.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)));
    }

    let mut features = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut codes: Vec<u32> = Vec::new();
    let mut row = csv::StringRecord::new();
    while rdr.read_record(&mut row)? {
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != header.len() {
            return Err(Error::MalformedRow {
                line,
                expected: header.len(),
                found: row.len(),
            });
        }
        for (i, field) in row.iter().enumerate() {
            if i == label_col {
                continue;
            }
            let v: f64 = field.trim().parse().map_err(|_| Error::NonNumeric {
                line,
                column: header[i].to_string(),
                value: field.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    line,
                    column: header[i].to_string(),
                });
            }
            features.push(v);
        }
        let label = &row[label_col];
        if schema.universe.is_some() {
            let code = *known.get(label).ok_or_else(|| Error::UnknownLabel {
                line,
                label: label.to_string(),
            })?;
            codes.push(code);
        } else {
            raw_labels.push(label.to_string());
        }
    }

    let (classes, labels) = match &schema.universe {
        Some(u) => (u.clone(), codes),
        None => {
            let sorted: BTreeSet<&str> = raw_labels.iter().map(String::as_str).collect();
            let classes: Vec<String> = sorted.into_iter().map(str::to_string).collect();
            let index: HashMap<&str, u32> = classes
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_str(), i as u32))
                .collect();
            let labels = raw_labels.iter().map(|l| index[l.as_str()]).collect();
            (classes, labels)
        }
    };
    Ok(Dataset {
        classes,
        feature_names,
        features,
        labels,
    })
}

pub fn save_points(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_points(data, file)
}

/// Writes `f1,...,fd,class` rows. Features use the shortest representation
/// that parses back to the identical `f64`.
pub fn write_points<W: Write>(data: &Dataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = data.feature_names.iter().map(String::as_str).collect();
    header.push("class");
    wtr.write_record(&header)?;
    let mut fields: Vec<String> = Vec::with_capacity(data.dimensionality() + 1);
    for (x, l) in data.iter() {
        fields.clear();
        fields.extend(x.iter().map(|v| v.to_string()));
        fields.push(data.classes[l as usize].clone());
        wtr.write_record(&fields)?;
    }
    wtr.flush().map_err(|e| Error::io("<points>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_head, Sample};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn read(text: &str, schema: &PointSchema) -> Result<Dataset> {
        read_points(text.as_bytes(), schema)
    }

    #[test]
    fn loads_small_file() {
        let d = read(
            "f1,f2,class\n1.0,2.0,ground\n3,4,water\n-1.5,0,ground\n",
            &PointSchema::default(),
        )
        .unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.dimensionality(), 2);
        assert_eq!(d.classes(), &names(&["ground", "water"]));
        assert_eq!(d.features(2), &[-1.5, 0.0]);
        assert_eq!(d.labels(), &[0, 1, 0]);
    }

    #[test]
    fn nan_feature_is_rejected_with_line() {
        let err = read("f1,class\n1,a\nNaN,a\n", &PointSchema::default()).unwrap_err();
        assert!(matches!(err, Error::NonFinite { line: 3, .. }), "{err}");
    }

    #[test]
    fn unknown_label_under_explicit_universe() {
        let schema = PointSchema::with_universe(names(&["a", "b"]));
        let err = read("f1,class\n1,a\n2,b\n3,c\n4,c\n", &schema).unwrap_err();
        match err {
            Error::UnknownLabel { line, label } => {
                assert_eq!(line, 4);
                assert_eq!(label, "c");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn malformed_and_non_numeric_rows() {
        let s = PointSchema::default();
        assert!(matches!(
            read("f1,f2,class\n1,2,a\n1,a\n", &s),
            Err(Error::MalformedRow {
                line: 3,
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            read("f1,class\nabc,a\n", &s),
            Err(Error::NonNumeric { line: 2, .. })
        ));
        assert!(matches!(read("", &s), Err(Error::EmptyFile)));
        assert!(matches!(read("f1,f2\n1,2\n", &s), Err(Error::BadHeader(_))));
    }

    #[test]
    fn histogram_cases() {
        let empty = Dataset::from_records(names(&["a", "b"]), 1, vec![]).unwrap();
        let h = empty.class_histogram();
        assert_eq!(h.counts(), &[0, 0]);
        assert_eq!(h.total(), 0);

        let recs = (0..10).map(|i| PointRecord::new(vec![i as f64], 1));
        let d = Dataset::from_records(names(&["a", "b", "c"]), 1, recs).unwrap();
        assert_eq!(d.class_histogram().counts(), &[0, 10, 0]);
    }

    #[test]
    fn reference_totals() {
        let h = ClassHistogram::reference();
        assert_eq!(h.total(), 2_872_488);
        assert_eq!(h.count_of("ground"), Some(2_401_914));
        assert_eq!(h.count_of("walls/buildings"), Some(13));
        assert_eq!(h.n_classes(), 17);
    }

    #[test]
    fn largest_remainder_sums_exactly() {
        let h = ClassHistogram::reference().scaled_to(100_000).unwrap();
        assert_eq!(h.total(), 100_000);
        assert_eq!(h.counts().iter().sum::<usize>(), 100_000);
        // 2401914 * 100000 / 2872488 = 83617.9...
        assert_eq!(h.count_of("ground"), Some(83_618));
        assert_eq!(largest_remainder(&[1, 1, 1], 2), vec![1, 1, 0]);
    }

    #[test]
    fn synthesize_exact_counts_and_determinism() {
        let spec = SynthSpec {
            dimensionality: 2,
            overlap: 0.5,
            classes: vec![
                SynthClass {
                    name: "A".into(),
                    count: 5,
                    center: vec![0.0, 0.0],
                    spread: 1.0,
                },
                SynthClass {
                    name: "B".into(),
                    count: 3,
                    center: vec![4.0, 4.0],
                    spread: 0.5,
                },
            ],
        };
        let a = synthesize(&spec, 11).unwrap();
        assert_eq!(a.class_histogram().counts(), &[5, 3]);
        assert_eq!(a, synthesize(&spec, 11).unwrap());
        assert_ne!(a, synthesize(&spec, 12).unwrap());
    }

    #[test]
    fn synthesize_rejects_bad_specs() {
        let mut spec = SynthSpec {
            dimensionality: 1,
            overlap: 0.0,
            classes: vec![SynthClass {
                name: "A".into(),
                count: 0,
                center: vec![0.0],
                spread: 1.0,
            }],
        };
        assert!(matches!(
            synthesize(&spec, 0),
            Err(Error::InvalidSynthSpec(_))
        ));
        spec.classes[0].count = 3;
        spec.classes[0].spread = 0.0;
        assert!(spec.validate().is_err());
        spec.classes[0].spread = 1.0;
        spec.overlap = 1.5;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn overlap_one_collapses_centers() {
        let mut spec = SynthSpec::reference(1000, 3, 1.0).unwrap();
        let c = spec.effective_centers();
        for row in &c[1..] {
            for (a, b) in row.iter().zip(&c[0]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        spec.overlap = 0.0;
        assert_eq!(spec.effective_centers()[3], spec.classes[3].center);
    }

    #[test]
    fn synth_spec_toml_round_trip() {
        let spec = SynthSpec::reference(500, 2, 0.3).unwrap();
        assert_eq!(SynthSpec::from_toml(&spec.to_toml()).unwrap(), spec);
    }

    #[test]
    fn complement_cases() {
        let recs = (0..10).map(|i| PointRecord::new(vec![i as f64], 0));
        let d = Dataset::from_records(names(&["a"]), 1, recs).unwrap();
        let rest = split_complement(&d, &sample_head(&d, 5).unwrap()).unwrap();
        assert_eq!(rest.len(), 5);
        assert_eq!(rest.features(0), &[5.0]);
        assert_eq!(
            split_complement(&d, &sample_head(&d, 0).unwrap()).unwrap(),
            d
        );
        assert!(split_complement(&d, &sample_head(&d, 10).unwrap())
            .unwrap()
            .is_empty());

        let dup = Sample::from_indices(vec![1, 1], None).unwrap();
        assert!(matches!(
            split_complement(&d, &dup),
            Err(Error::DuplicateIndex(1))
        ));
        let oob = Sample::from_indices(vec![10], None).unwrap();
        assert!(matches!(
            split_complement(&d, &oob),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn csv_round_trip_preserves_bits() {
        let spec = SynthSpec::reference(300, 3, 0.3).unwrap();
        let d = synthesize(&spec, 5).unwrap();
        let mut buf = Vec::new();
        write_points(&d, &mut buf).unwrap();
        let back =
            read_points(&buf[..], &PointSchema::with_universe(d.classes().to_vec())).unwrap();
        assert_eq!(back, d);
    }
}

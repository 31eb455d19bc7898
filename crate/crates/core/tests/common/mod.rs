#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stratcart::corpus::PointRecord;
use stratcart::Dataset;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random labeled data. With `coarse` the features are small integers so
/// duplicate values and tied gains occur.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, d: usize, k: usize, coarse: bool) -> Dataset {
    let classes = (0..k).map(|i| format!("c{i}")).collect();
    let recs: Vec<PointRecord> = (0..n)
        .map(|_| {
            let x = (0..d)
                .map(|_| {
                    if coarse {
                        rng.random_range(0..6) as f64
                    } else {
                        rng.random_range(-3.0..3.0)
                    }
                })
                .collect();
            PointRecord::new(x, rng.random_range(0..k as u32))
        })
        .collect();
    Dataset::from_records(classes, d, recs).unwrap()
}

/// Clustered data where class means differ, so trees have real structure.
pub fn clustered_dataset(rng: &mut ChaCha8Rng, n: usize, d: usize, k: usize) -> Dataset {
    let centers: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let classes = (0..k).map(|i| format!("c{i}")).collect();
    let recs: Vec<PointRecord> = (0..n)
        .map(|_| {
            let l = rng.random_range(0..k);
            let x = centers[l]
                .iter()
                .map(|c| c + rng.random_range(-1.5..1.5))
                .collect();
            PointRecord::new(x, l as u32)
        })
        .collect();
    Dataset::from_records(classes, d, recs).unwrap()
}

pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.1..10.0)).collect()
}

/// Result of the brute-force scorer: feature, the set of records sent
/// left (as a membership mask), the threshold, and the gain.
#[derive(Debug, Clone)]
pub struct OracleSplit {
    pub feature: usize,
    pub threshold: f64,
    pub left: Vec<bool>,
    pub gain: f64,
}

/// Prior-weighted Gini risk `p(t) · (1 − Σ p(j|t)²)` computed from scratch
/// for the records selected by `member`.
fn risk(
    data: &Dataset,
    weights: &[f64],
    member: &dyn Fn(usize) -> bool,
    class_total: &[f64],
    prior: &[f64],
) -> f64 {
    let k = class_total.len();
    let mut joint = vec![0.0; k];
    for (i, &w) in weights.iter().enumerate() {
        if member(i) {
            joint[data.label(i) as usize] += w;
        }
    }
    for j in 0..k {
        joint[j] = if class_total[j] > 0.0 {
            prior[j] * joint[j] / class_total[j]
        } else {
            0.0
        };
    }
    let p: f64 = joint.iter().sum();
    if p <= 0.0 {
        return 0.0;
    }
    p * (1.0 - joint.iter().map(|q| (q / p) * (q / p)).sum::<f64>())
}

/// Independent exhaustive search: every feature, every midpoint between
/// consecutive distinct values, gains evaluated directly from the data.
/// `priors = None` means weighted class shares. Ties keep the first
/// candidate in (feature, threshold) order; gains must exceed 1e-12.
pub fn brute_force_split(
    data: &Dataset,
    weights: &[f64],
    priors: Option<&[f64]>,
    min_bucket: usize,
) -> Option<OracleSplit> {
    let k = data.n_classes();
    let n = data.len();
    let mut class_total = vec![0.0; k];
    for i in 0..n {
        class_total[data.label(i) as usize] += weights[i];
    }
    let grand: f64 = class_total.iter().sum();
    let prior: Vec<f64> = match priors {
        None => class_total.iter().map(|t| t / grand).collect(),
        Some(p) => {
            let present: f64 = (0..k).filter(|&j| class_total[j] > 0.0).map(|j| p[j]).sum();
            (0..k).map(|j| p[j] / present).collect()
        }
    };
    let root = risk(data, weights, &|_| true, &class_total, &prior);

    let mut best: Option<OracleSplit> = None;
    for f in 0..data.dimensionality() {
        let mut values: Vec<f64> = (0..n).map(|i| data.features(i)[f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let mut thr = (w[0] + w[1]) / 2.0;
            if thr <= w[0] {
                thr = w[1];
            }
            let left: Vec<bool> = (0..n).map(|i| data.features(i)[f] < thr).collect();
            let n_left = left.iter().filter(|&&b| b).count();
            if n_left < min_bucket || n - n_left < min_bucket {
                continue;
            }
            let gain = root
                - risk(data, weights, &|i| left[i], &class_total, &prior)
                - risk(data, weights, &|i| !left[i], &class_total, &prior);
            let better = match &best {
                None => gain > 1e-12,
                Some(b) => gain > b.gain + 1e-12,
            };
            if better {
                best = Some(OracleSplit {
                    feature: f,
                    threshold: thr,
                    left,
                    gain,
                });
            }
        }
    }
    best
}

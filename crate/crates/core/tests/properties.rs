mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::Rng;

use common::{clustered_dataset, random_weights, rng};
use stratcart::cart::{grow_tree, predict_batch, TreeParams};
use stratcart::corpus::{read_points, split_complement, write_points, PointRecord, PointSchema};
use stratcart::design::{empirical_priors, post_stratification_weights};
use stratcart::metrics::{confusion_matrix, kappa, mcr_total, ConfusionMatrix};
use stratcart::sampling::{sample_srs, sample_stratified, stratified_allocation};
use stratcart::{ClassHistogram, Dataset, WeightVector};

fn dataset_from(labels: &[u32], k: usize) -> Dataset {
    let classes = (0..k).map(|i| format!("c{i}")).collect();
    let recs = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| PointRecord::new(vec![i as f64, (i * 7 % 13) as f64], l));
    Dataset::from_records(classes, 2, recs).unwrap()
}

fn labels_strategy() -> impl Strategy<Value = (Vec<u32>, usize)> {
    (1usize..=5).prop_flat_map(|k| (prop::collection::vec(0..k as u32, 1..300), Just(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn histogram_counts_every_record((labels, k) in labels_strategy()) {
        let d = dataset_from(&labels, k);
        let h = d.class_histogram();
        prop_assert_eq!(h.total(), labels.len());
        for c in 0..k as u32 {
            prop_assert_eq!(h.count(c), labels.iter().filter(|&&l| l == c).count());
        }
    }

    #[test]
    fn stratified_sample_matches_allocation((labels, k) in labels_strategy(), s in 1usize..40, seed: u64) {
        let d = dataset_from(&labels, k);
        let sample = sample_stratified(&d, s, seed).unwrap();
        let alloc = stratified_allocation(&d.class_histogram(), s);
        let distinct: HashSet<usize> = sample.indices().iter().copied().collect();
        prop_assert_eq!(distinct.len(), sample.len());
        prop_assert!(sample.indices().iter().all(|&i| i < d.len()));
        let mut got = vec![0usize; k];
        for &i in sample.indices() {
            got[d.label(i) as usize] += 1;
        }
        prop_assert_eq!(got, alloc.targets.clone());
        prop_assert_eq!(sample.len(), alloc.total());
        prop_assert_eq!(sample_stratified(&d, s, seed).unwrap(), sample);
    }

    #[test]
    fn allocation_is_monotone_in_s(counts in prop::collection::vec(0usize..5000, 1..20), s in 1usize..3000) {
        let classes = (0..counts.len()).map(|i| format!("c{i}")).collect();
        let h = ClassHistogram::new(classes, counts).unwrap();
        let a = stratified_allocation(&h, s);
        let b = stratified_allocation(&h, s + 1);
        for (x, y) in a.targets.iter().zip(&b.targets) {
            prop_assert!(x <= y);
        }
        for (t, &n_h) in a.targets.iter().zip(h.counts()) {
            prop_assert!(*t <= s && 2 * t <= n_h);
        }
    }

    #[test]
    fn sample_and_complement_partition((labels, k) in labels_strategy(), frac in 0.0f64..1.0, seed: u64) {
        let d = dataset_from(&labels, k);
        let n = ((d.len() as f64) * frac) as usize;
        let sample = sample_srs(&d, n, seed).unwrap();
        prop_assert_eq!(sample.len(), n);
        let rest = split_complement(&d, &sample).unwrap();
        prop_assert_eq!(sample.len() + rest.len(), d.len());
        // first feature is the record index, so the two sides are disjoint and cover 0..N
        let mut seen: Vec<usize> = sample.indices().to_vec();
        seen.extend((0..rest.len()).map(|i| rest.features(i)[0] as usize));
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..d.len()).collect::<Vec<_>>());
    }

    #[test]
    fn poststrat_weights_sum_to_sampled_strata((labels, k) in labels_strategy(), s in 1usize..20, seed: u64) {
        let d = dataset_from(&labels, k);
        let h = d.class_histogram();
        let sample = sample_stratified(&d, s, seed).unwrap();
        prop_assume!(!sample.is_empty());
        let w = post_stratification_weights(&sample, d.labels(), &h).unwrap();
        let sampled: HashSet<u32> = sample.indices().iter().map(|&i| d.label(i)).collect();
        let want: usize = sampled.iter().map(|&c| h.count(c)).sum();
        let got: f64 = w.as_slice().iter().sum();
        prop_assert!((got - want as f64).abs() <= 1e-9 * want as f64);
    }

    #[test]
    fn empirical_priors_ignore_weight_scale((labels, k) in labels_strategy(), c in 1e-3f64..1e6, seed: u64) {
        let d = dataset_from(&labels, k);
        let sample = sample_srs(&d, d.len().div_ceil(2), seed).unwrap();
        let mut r = rng(seed);
        let w = random_weights(&mut r, sample.len());
        let scaled: Vec<f64> = w.iter().map(|x| x * c).collect();
        let a = empirical_priors(&sample, d.labels(), &WeightVector::from(&sample.clone().with_weights(w).unwrap()), k).unwrap();
        let b = empirical_priors(&sample, d.labels(), &WeightVector::from(&sample.clone().with_weights(scaled).unwrap()), k).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn mcr_total_is_row_weighted_error(rows in (2usize..6).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0u64..40, k), k))) {
        let m = ConfusionMatrix::from_rows(&rows);
        prop_assume!(m.total() > 0);
        let weighted: f64 = (0..m.n_classes())
            .filter(|&i| m.row_sum(i) > 0)
            .map(|i| {
                let err = 1.0 - m.get(i, i) as f64 / m.row_sum(i) as f64;
                err * m.row_sum(i) as f64 / m.total() as f64
            })
            .sum();
        prop_assert!((mcr_total(&m).unwrap() - weighted).abs() <= 1e-12);
        match kappa(&m) {
            Ok(k) => prop_assert_eq!(k == 1.0, m.is_diagonal()),
            Err(_) => prop_assert!(m.is_diagonal()),
        }
    }

    #[test]
    fn points_csv_round_trip(rows in prop::collection::vec((prop::collection::vec(-1e9f64..1e9, 3), 0u32..4), 1..50)) {
        let classes: Vec<String> = ["ground", "water", "deciduous forest", "walls/buildings"].map(String::from).to_vec();
        let recs = rows.iter().map(|(x, l)| PointRecord::new(x.clone(), *l));
        let d = Dataset::from_records(classes.clone(), 3, recs).unwrap();
        let mut buf = Vec::new();
        write_points(&d, &mut buf).unwrap();
        let back = read_points(&buf[..], &PointSchema::with_universe(classes)).unwrap();
        prop_assert_eq!(back.labels(), d.labels());
        for i in 0..d.len() {
            prop_assert_eq!(back.features(i), d.features(i));
        }
    }
}

#[test]
fn srs_is_uniform() {
    let d = dataset_from(&[0; 10], 1);
    let draws = 2000;
    let mut hits = [0usize; 10];
    for seed in 0..draws {
        let s = sample_srs(&d, 1, seed as u64).unwrap();
        hits[s.indices()[0]] += 1;
    }
    let expected = draws as f64 / 10.0;
    let band = 4.0 * (draws as f64 * 0.1 * 0.9).sqrt();
    for (i, &h) in hits.iter().enumerate() {
        assert!((h as f64 - expected).abs() <= band, "index {i}: {h} hits");
    }
}

#[test]
fn kappa_near_zero_for_random_predictions() {
    let mut r = rng(11);
    let truth: Vec<u32> = (0..10_000).map(|_| r.random_range(0..4)).collect();
    let pred: Vec<u32> = (0..10_000).map(|_| r.random_range(0..4)).collect();
    let k = kappa(&confusion_matrix(&truth, &pred, 4).unwrap()).unwrap();
    assert!(k.abs() <= 0.05, "kappa {k}");
}

#[test]
fn larger_cp_never_grows_the_tree() {
    let mut r = rng(12);
    for _ in 0..20 {
        let d = clustered_dataset(&mut r, 300, 3, 4);
        let w = random_weights(&mut r, d.len());
        let mut last = usize::MAX;
        for cp in [0.0, 0.001, 0.005, 0.01, 0.05, 0.2, 1.0] {
            let params = TreeParams {
                cp,
                ..TreeParams::default()
            };
            let t = grow_tree(&d, &w, &params).unwrap();
            assert!(
                t.n_leaves() <= last,
                "cp {cp}: {} leaves after {last}",
                t.n_leaves()
            );
            last = t.n_leaves();
            let again = grow_tree(&d, &w, &params).unwrap();
            assert_eq!(
                predict_batch(&t, &d).unwrap(),
                predict_batch(&again, &d).unwrap()
            );
        }
        let shallow = TreeParams {
            max_depth: 2,
            ..TreeParams::unrestricted()
        };
        assert!(grow_tree(&d, &w, &shallow).unwrap().depth() <= 2);
    }
}

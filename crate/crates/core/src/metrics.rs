//! Cross-classification matrices and accuracy metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// K×K counts, rows = true class, columns = predicted class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<u64>,
    total: u64,
}

impl ConfusionMatrix {
    pub fn zeros(k: usize) -> Self {
        ConfusionMatrix {
            k,
            counts: vec![0; k * k],
            total: 0,
        }
    }

    /// Builds a matrix from row-major rows. Panics if `rows` is not square.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let k = rows.len();
        let mut m = ConfusionMatrix::zeros(k);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), k, "confusion matrix must be square");
            for (j, &c) in row.iter().enumerate() {
                m.counts[i * k + j] = c;
                m.total += c;
            }
        }
        m
    }

    pub fn n_classes(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.k + predicted]
    }

    pub fn row(&self, truth: usize) -> &[u64] {
        &self.counts[truth * self.k..(truth + 1) * self.k]
    }

    pub fn row_sum(&self, truth: usize) -> u64 {
        self.row(truth).iter().sum()
    }

    pub fn col_sum(&self, predicted: usize) -> u64 {
        (0..self.k).map(|i| self.get(i, predicted)).sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.k).map(|i| self.get(i, i)).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.trace() == self.total
    }
}

pub fn confusion_matrix(
    truth: &[u32],
    predicted: &[u32],
    n_classes: usize,
) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            truth: truth.len(),
            predicted: predicted.len(),
        });
    }
    let mut m = ConfusionMatrix::zeros(n_classes);
    for (&t, &p) in truth.iter().zip(predicted) {
        for l in [t, p] {
            if l as usize >= n_classes {
                return Err(Error::UnknownCode(l));
            }
        }
        m.counts[t as usize * n_classes + p as usize] += 1;
    }
    m.total = truth.len() as u64;
    Ok(m)
}

/// `1 − trace / N`.
pub fn mcr_total(m: &ConfusionMatrix) -> Result<f64> {
    if m.total == 0 {
        return Err(Error::UndefinedMetric("mcr_total of an empty matrix"));
    }
    Ok(1.0 - m.trace() as f64 / m.total as f64)
}

/// Per-class error rates `1 − M_hh / row_h` for classes with a nonempty
/// truth row, in class order.
pub fn class_error_rates(m: &ConfusionMatrix) -> Vec<(usize, f64)> {
    (0..m.k)
        .filter_map(|h| {
            let row = m.row_sum(h);
            (row > 0).then(|| (h, 1.0 - m.get(h, h) as f64 / row as f64))
        })
        .collect()
}

/// Mean per-class error over classes that occur in the truth.
pub fn mcr_class(m: &ConfusionMatrix) -> Result<f64> {
    let rates = class_error_rates(m);
    if rates.is_empty() {
        return Err(Error::UndefinedMetric("mcr_class with no truth classes"));
    }
    Ok(rates.iter().map(|(_, r)| r).sum::<f64>() / rates.len() as f64)
}

/// Cohen's kappa `(P(a) − P(e)) / (1 − P(e))` with
/// `P(e) = Σ_j row_j · col_j / N²`.
pub fn kappa(m: &ConfusionMatrix) -> Result<f64> {
    if m.total == 0 {
        return Err(Error::UndefinedMetric("kappa of an empty matrix"));
    }
    let n = m.total as f64;
    let pa = m.trace() as f64 / n;
    let pe: f64 = (0..m.k)
        .map(|j| (m.row_sum(j) as f64 / n) * (m.col_sum(j) as f64 / n))
        .sum();
    if pe >= 1.0 {
        return Err(Error::UndefinedMetric("kappa with chance agreement 1"));
    }
    Ok((pa - pe) / (1.0 - pe))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTriple {
    pub mcr_total: f64,
    pub mcr_class: f64,
    pub kappa: f64,
}

impl MetricTriple {
    pub fn from_matrix(m: &ConfusionMatrix) -> Result<Self> {
        Ok(MetricTriple {
            mcr_total: mcr_total(m)?,
            mcr_class: mcr_class(m)?,
            kappa: kappa(m)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> ConfusionMatrix {
        ConfusionMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn confusion_cases() {
        let c = confusion_matrix(&[0, 1, 0], &[0, 1, 0], 2).unwrap();
        assert_eq!(
            (c.get(0, 0), c.get(1, 1), c.get(0, 1), c.get(1, 0)),
            (2, 1, 0, 0)
        );
        let c = confusion_matrix(&[0, 0], &[1, 1], 2).unwrap();
        assert_eq!(c.get(0, 1), 2);
        let c = confusion_matrix(&[], &[], 3).unwrap();
        assert_eq!(c.total(), 0);
        assert!(matches!(
            confusion_matrix(&[0], &[], 2),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            confusion_matrix(&[0], &[2], 2),
            Err(Error::UnknownCode(2))
        ));
    }

    #[test]
    fn mcr_total_cases() {
        assert_eq!(mcr_total(&m(&[&[5, 0], &[0, 3]])).unwrap(), 0.0);
        assert!((mcr_total(&m(&[&[90, 10], &[30, 70]])).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(mcr_total(&m(&[&[0, 4], &[2, 0]])).unwrap(), 1.0);
        assert!(mcr_total(&ConfusionMatrix::zeros(2)).is_err());
    }

    #[test]
    fn mcr_class_cases() {
        assert_eq!(mcr_class(&m(&[&[5, 0], &[0, 3]])).unwrap(), 0.0);
        assert!((mcr_class(&m(&[&[90, 10], &[30, 70]])).unwrap() - 0.2).abs() < 1e-15);
        let rare = m(&[&[99, 1], &[1, 0]]);
        assert!((mcr_class(&rare).unwrap() - 0.505).abs() < 1e-15);
        assert!((mcr_total(&rare).unwrap() - 2.0 / 101.0).abs() < 1e-15);
        // absent truth class is skipped
        assert!(
            (mcr_class(&m(&[&[8, 2, 0], &[0, 0, 0], &[0, 0, 5]])).unwrap() - 0.1).abs() < 1e-15
        );
        assert!(mcr_class(&ConfusionMatrix::zeros(3)).is_err());
    }

    #[test]
    fn kappa_cases() {
        assert_eq!(kappa(&m(&[&[5, 0], &[0, 3]])).unwrap(), 1.0);
        let k = kappa(&m(&[&[45, 15], &[25, 15]])).unwrap();
        assert!((k - 0.06 / 0.46).abs() < 1e-12);
        assert!((k - 0.13043).abs() < 1e-5);
        // rows (60, 40), cols (30, 70), N = 100: outer product / N
        let indep = m(&[&[18, 42], &[12, 28]]);
        assert!(kappa(&indep).unwrap().abs() < 1e-12);
        assert!(matches!(
            kappa(&m(&[&[4, 0], &[0, 0]])),
            Err(Error::UndefinedMetric(_))
        ));
    }
}

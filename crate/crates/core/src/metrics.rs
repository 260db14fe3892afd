//! Accuracy, agreement and importance-vector comparison.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::models::Classifier;
use crate::{Error, Matrix, Result};

/// Fraction of positions where `predictions` equals `truth`.
pub fn accuracy(predictions: &[usize], truth: &[usize]) -> Result<f64> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: truth.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let hits = predictions.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Fraction of rows of `points` on which the two models predict the same class.
pub fn agreement<A, B>(a: &A, b: &B, points: &Matrix) -> Result<f64>
where
    A: Classifier + ?Sized,
    B: Classifier + ?Sized,
{
    let pa = a.predict_batch(points)?;
    let pb = b.predict_batch(points)?;
    accuracy(&pa, &pb)
}

/// Gini concentration coefficient of a nonnegative vector:
/// `Σ_i Σ_j |x_i − x_j| / (2 · d · Σ x)`. Zero for a uniform vector,
/// `(d − 1)/d` for a point mass. Scale-invariant.
pub fn concentration_index(importance: &[f64]) -> Result<f64> {
    if let Some(i) = importance.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::NegativeImportance(i));
    }
    let total: f64 = importance.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroImportance);
    }
    let d = importance.len() as f64;
    let mut sum = 0.0;
    for a in importance {
        for b in importance {
            sum += libm::fabs(a - b);
        }
    }
    Ok(sum / (2.0 * d * total))
}

/// 1-based ranks in descending order of value; tied values share their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson correlation of average ranks). `None`
/// when either vector is constant or shorter than two.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Ok(None);
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        return Ok(None);
    }
    Ok(Some(cov / libm::sqrt(va * vb)))
}

/// Indices of the `k` largest values; ties go to the lower index.
pub fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order.truncate(k.min(values.len()));
    order
}

pub fn top_k_overlap(a: &[f64], b: &[f64], k: usize) -> usize {
    let ta = top_k(a, k);
    let tb = top_k(b, k);
    ta.iter().filter(|i| tb.contains(i)).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceRow {
    pub feature: String,
    pub original: f64,
    pub copy: f64,
}

/// Original vs copy importances, aligned by feature name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    /// Sorted by copy importance, descending (ties in input order).
    pub rows: Vec<ImportanceRow>,
    pub spearman: Option<f64>,
    pub top3_overlap: usize,
    pub top5_overlap: usize,
    pub original_concentration: f64,
    pub copy_concentration: f64,
}

impl ImportanceReport {
    pub fn original(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.original).collect()
    }

    pub fn copy(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.copy).collect()
    }
}

pub fn compare_importances<S: AsRef<str>>(
    original: &[f64],
    copy: &[f64],
    names: &[S],
) -> Result<ImportanceReport> {
    if original.len() != copy.len() {
        return Err(Error::LengthMismatch {
            left: original.len(),
            right: copy.len(),
        });
    }
    if names.len() != copy.len() {
        return Err(Error::LengthMismatch {
            left: names.len(),
            right: copy.len(),
        });
    }
    let mut order: Vec<usize> = (0..copy.len()).collect();
    order.sort_by(|&a, &b| copy[b].total_cmp(&copy[a]).then(a.cmp(&b)));
    let rows = order
        .into_iter()
        .map(|i| ImportanceRow {
            feature: String::from(names[i].as_ref()),
            original: original[i],
            copy: copy[i],
        })
        .collect();
    Ok(ImportanceReport {
        rows,
        spearman: spearman(original, copy)?,
        top3_overlap: top_k_overlap(original, copy, 3),
        top5_overlap: top_k_overlap(original, copy, 5),
        original_concentration: concentration_index(original)?,
        copy_concentration: concentration_index(copy)?,
    })
}

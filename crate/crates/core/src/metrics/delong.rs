//! DeLong comparison of two correlated auROCs over the same labels.
//!
//! Structural components are computed from mid-ranks (the fast formulation):
//! for a score vector with positives `X` and negatives `Y`,
//!
//! ```text
//! V10(x_i) = (R_Z(x_i) - R_X(x_i)) / F
//! V01(y_j) = 1 - (R_Z(y_j) - R_Y(y_j)) / T
//! ```
//!
//! where `R_Z`, `R_X`, `R_Y` are mid-ranks within all samples, the positives,
//! and the negatives. The variance of `A_a - A_b` is
//! `var(V10_a - V10_b) / T + var(V01_a - V01_b) / F` with `n - 1` denominators.

use serde::Serialize;

use super::hypothesis::{floor_p, Alternative, TestResult};
use super::require_both_classes;
use super::special::erfc;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelongResult {
    pub auroc_a: f64,
    pub auroc_b: f64,
    pub variance: f64,
    pub test: TestResult,
}

/// Mid-ranks (1-based, ties averaged).
pub(crate) fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = 0.5 * (i + j) as f64 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Per-positive and per-negative structural components for one score vector.
pub(crate) fn structural_components(scores: &[f64], labels: &[u8]) -> (Vec<f64>, Vec<f64>) {
    let pos: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y == 1)
        .map(|(&s, _)| s)
        .collect();
    let neg: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y == 0)
        .map(|(&s, _)| s)
        .collect();
    let (t, f) = (pos.len() as f64, neg.len() as f64);
    let all: Vec<f64> = pos.iter().chain(&neg).copied().collect();
    let rz = midranks(&all);
    let rx = midranks(&pos);
    let ry = midranks(&neg);
    let v10 = (0..pos.len()).map(|i| (rz[i] - rx[i]) / f).collect();
    let v01 = (0..neg.len())
        .map(|j| 1.0 - (rz[pos.len() + j] - ry[j]) / t)
        .collect();
    (v10, v01)
}

fn sample_variance(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
}

pub fn delong_compare(scores_a: &[f64], scores_b: &[f64], labels: &[u8]) -> Result<DelongResult> {
    if scores_a.len() != labels.len() || scores_b.len() != labels.len() {
        return Err(Error::MisalignedLabels(format!(
            "{} and {} scores for {} labels",
            scores_a.len(),
            scores_b.len(),
            labels.len()
        )));
    }
    let counts = require_both_classes(labels)?;
    if counts.positives < 2 || counts.negatives < 2 {
        return Err(Error::TooFewSamples(
            "DeLong variance needs at least two samples per class".into(),
        ));
    }
    let (t, f) = (counts.positives as f64, counts.negatives as f64);
    let (v10a, v01a) = structural_components(scores_a, labels);
    let (v10b, v01b) = structural_components(scores_b, labels);
    let auroc_a = v10a.iter().sum::<f64>() / t;
    let auroc_b = v10b.iter().sum::<f64>() / t;
    let d10: Vec<f64> = v10a.iter().zip(&v10b).map(|(a, b)| a - b).collect();
    let d01: Vec<f64> = v01a.iter().zip(&v01b).map(|(a, b)| a - b).collect();
    let variance = sample_variance(&d10) / t + sample_variance(&d01) / f;
    let diff = auroc_a - auroc_b;

    let (z, p) = if variance > 0.0 {
        let z = diff / variance.sqrt();
        (z, erfc(z.abs() / std::f64::consts::SQRT_2))
    } else if diff == 0.0 {
        // identical rankings
        (0.0, 1.0)
    } else {
        (diff.signum() * f64::INFINITY, 0.0)
    };
    Ok(DelongResult {
        auroc_a,
        auroc_b,
        variance,
        test: TestResult {
            statistic: z,
            p_value: floor_p(p),
            alternative: Alternative::TwoSided,
            df: None,
            n: Some(labels.len()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::auroc_scores;
    use crate::rng::RngStream;

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn identical_scores_give_p_one() {
        let s = [0.1, 0.4, 0.35, 0.8, 0.5];
        let y = [0, 0, 1, 1, 1];
        let r = delong_compare(&s, &s, &y).unwrap();
        assert_eq!(r.test.statistic, 0.0);
        assert_eq!(r.test.p_value, 1.0);
        assert_eq!(r.variance, 0.0);
    }

    #[test]
    fn auroc_consistency_and_antisymmetry() {
        let mut rng = RngStream::from_seed(4);
        for _ in 0..50 {
            let n = 10 + rng.index(30);
            let mut y: Vec<u8> = (0..n).map(|_| rng.index(2) as u8).collect();
            y[..2].copy_from_slice(&[1, 1]);
            y[2..4].copy_from_slice(&[0, 0]);
            let a: Vec<f64> = (0..n).map(|_| rng.index(6) as f64).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            let ab = delong_compare(&a, &b, &y).unwrap();
            let ba = delong_compare(&b, &a, &y).unwrap();
            assert!((ab.auroc_a - auroc_scores(&a, &y).unwrap()).abs() < 1e-12);
            assert!((ab.auroc_b - auroc_scores(&b, &y).unwrap()).abs() < 1e-12);
            assert!((ab.test.statistic + ba.test.statistic).abs() < 1e-12);
            assert!((ab.test.p_value - ba.test.p_value).abs() < 1e-12);
        }
    }

    #[test]
    fn invariant_to_monotone_transform() {
        let a = [0.2, 0.9, 0.4, 0.4, 0.7, 0.1, 0.8];
        let b = [0.5, 0.3, 0.6, 0.2, 0.9, 0.4, 0.1];
        let y = [0, 1, 0, 1, 1, 0, 0];
        let ta: Vec<f64> = a.iter().map(|v: &f64| v.exp() * 3.0 - 1.0).collect();
        let r1 = delong_compare(&a, &b, &y).unwrap();
        let r2 = delong_compare(&ta, &b, &y).unwrap();
        assert!((r1.test.statistic - r2.test.statistic).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(
            delong_compare(&[0.1, 0.2], &[0.1, 0.2], &[1, 1])
                .unwrap_err()
                .name(),
            "SingleClass"
        );
        assert_eq!(
            delong_compare(&[0.1], &[0.1, 0.2], &[1, 0])
                .unwrap_err()
                .name(),
            "MisalignedLabels"
        );
    }
}

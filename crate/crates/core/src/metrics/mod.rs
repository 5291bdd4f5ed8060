//! Rank-based evaluation and significance tests.
//!
//! Conventions, all normative:
//!
//! * auROC is the Mann-Whitney statistic with ties credited one half.
//! * The ROC and PR curves sweep the distinct scores in descending order and
//!   call a sample positive when `score >= threshold`.
//! * auPR is the trapezoidal integral of precision over recall across the
//!   swept points. The curve is extended to recall 0 at the precision of the
//!   first point; no `(0, 1)` anchor is added. Under this convention the
//!   mean-label dummy at balance 0.5 scores exactly 0.25, whereas step-wise
//!   average precision would not.

mod delong;
mod hypothesis;
mod rank;
pub mod special;

pub use delong::{delong_compare, DelongResult};
pub use hypothesis::{fisher_combine, t_test_one_sample, Alternative, TestResult, P_VALUE_FLOOR};
pub use rank::{aupr, aupr_scores, auroc, auroc_scores, pr_curve, roc_curve, PrCurve, RocCurve};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dataset::ClassCounts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub index: usize,
    pub score: f64,
    pub label: u8,
}

/// Pooled (score, label) pairs, one per sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictionSet {
    entries: Vec<Prediction>,
}

impl PredictionSet {
    /// Rejects non-finite scores, non-binary labels and repeated indices.
    /// Entries are kept sorted by sample index.
    pub fn new(mut entries: Vec<Prediction>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for (row, e) in entries.iter().enumerate() {
            if !e.score.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "score for sample {} is not finite",
                    e.index
                )));
            }
            if e.label > 1 {
                return Err(Error::NonBinaryLabel {
                    row,
                    value: e.label as i64,
                });
            }
            if !seen.insert(e.index) {
                return Err(Error::InvalidArgument(format!(
                    "sample {} appears twice",
                    e.index
                )));
            }
        }
        entries.sort_by_key(|e| e.index);
        Ok(PredictionSet { entries })
    }

    /// Entry `i` gets index `i`.
    pub fn from_scores(scores: &[f64], labels: &[u8]) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(Error::ShapeMismatch {
                rows: scores.len(),
                labels: labels.len(),
            });
        }
        Self::new(
            scores
                .iter()
                .zip(labels)
                .enumerate()
                .map(|(index, (&score, &label))| Prediction {
                    index,
                    score,
                    label,
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[Prediction] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scores(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.score).collect()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.entries.iter().map(|e| e.label).collect()
    }

    pub fn counts(&self) -> ClassCounts {
        ClassCounts::from_labels(&self.labels())
    }
}

pub(crate) fn require_both_classes(labels: &[u8]) -> Result<ClassCounts> {
    let c = ClassCounts::from_labels(labels);
    if c.is_single_class() {
        return Err(Error::SingleClass);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prediction_set_checks() {
        assert!(PredictionSet::from_scores(&[0.1, f64::NAN], &[0, 1]).is_err());
        assert!(PredictionSet::from_scores(&[0.1], &[0, 1]).is_err());
        let dup = vec![
            Prediction {
                index: 0,
                score: 0.0,
                label: 0,
            },
            Prediction {
                index: 0,
                score: 1.0,
                label: 1,
            },
        ];
        assert!(PredictionSet::new(dup).is_err());
        let ok = PredictionSet::new(vec![
            Prediction {
                index: 3,
                score: 0.0,
                label: 0,
            },
            Prediction {
                index: 1,
                score: 1.0,
                label: 1,
            },
        ])
        .unwrap();
        assert_eq!(ok.entries()[0].index, 1);
    }
}

//! Fold plans: ordered folds of test and excluded indices over `[0, n)`.
//!
//! The training set of a fold is implied: every index that is neither tested
//! nor excluded. Rebalancing schemes express themselves purely through the
//! excluded set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    #[serde(rename = "test")]
    pub test_indices: Vec<usize>,
    #[serde(rename = "excluded")]
    pub excluded_indices: Vec<usize>,
}

impl Fold {
    pub fn new(test_indices: Vec<usize>, excluded_indices: Vec<usize>) -> Self {
        Fold {
            test_indices,
            excluded_indices,
        }
    }

    /// `[0, n)` minus test minus excluded, ascending.
    pub fn train_indices(&self, n: usize) -> Vec<usize> {
        let mut held = vec![false; n];
        for &i in self.test_indices.iter().chain(&self.excluded_indices) {
            held[i] = true;
        }
        (0..n).filter(|&i| !held[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub n: usize,
    pub folds: Vec<Fold>,
}

impl FoldPlan {
    /// Validates the plan invariants before returning it.
    pub fn new(n: usize, folds: Vec<Fold>) -> Result<Self> {
        let plan = FoldPlan { n, folds };
        plan.check()?;
        Ok(plan)
    }

    pub fn len(&self) -> usize {
        self.folds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folds.is_empty()
    }

    /// Every test set is nonempty, test sets partition `[0, n)`, and within a
    /// fold test and excluded indices are disjoint and in range.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("invalid fold plan: {msg}")));
        let mut tested = vec![false; self.n];
        for (f, fold) in self.folds.iter().enumerate() {
            if fold.test_indices.is_empty() {
                return bad(format!("fold {f} has an empty test set"));
            }
            let mut in_fold = vec![false; self.n];
            for &i in fold.test_indices.iter().chain(&fold.excluded_indices) {
                if i >= self.n {
                    return bad(format!("fold {f} index {i} out of range"));
                }
                if in_fold[i] {
                    return bad(format!("fold {f} repeats index {i}"));
                }
                in_fold[i] = true;
            }
            for &i in &fold.test_indices {
                if tested[i] {
                    return bad(format!("index {i} is tested more than once"));
                }
                tested[i] = true;
            }
        }
        if let Some(i) = tested.iter().position(|&t| !t) {
            return bad(format!("index {i} is never tested"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fold plan serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let plan: FoldPlan = serde_json::from_str(s)?;
        plan.check()?;
        Ok(plan)
    }
}

/// Mean label over each fold's training indices, in fold order.
pub fn training_label_means(plan: &FoldPlan, labels: &[u8]) -> Result<Vec<f64>> {
    if labels.len() != plan.n {
        return Err(Error::ShapeMismatch {
            rows: plan.n,
            labels: labels.len(),
        });
    }
    plan.folds
        .iter()
        .enumerate()
        .map(|(f, fold)| {
            let train = fold.train_indices(plan.n);
            if train.is_empty() {
                return Err(Error::EmptyTrainingSet { fold: f });
            }
            let pos: usize = train.iter().map(|&i| labels[i] as usize).sum();
            Ok(pos as f64 / train.len() as f64)
        })
        .collect()
}

/// Positive and negative counts in each fold's training set.
pub fn training_class_counts(plan: &FoldPlan, labels: &[u8]) -> Vec<(usize, usize)> {
    plan.folds
        .iter()
        .map(|fold| {
            let train = fold.train_indices(plan.n);
            let pos = train.iter().filter(|&&i| labels[i] == 1).count();
            (pos, train.len() - pos)
        })
        .collect()
}

use super::stratified::stratified_groups;
use super::Splitter;
use crate::dataset::ClassCounts;
use crate::error::{Error, Result};
use crate::plan::{Fold, FoldPlan};
use crate::rng::RngStream;

/// Rebalanced leave-one-out: fold `i` tests sample `i` and excludes one
/// sample of the opposite label, drawn uniformly and independently per fold.
/// Every training set then holds exactly `T - 1` positives and `F - 1` negatives.
pub fn rloocv_plan(labels: &[u8], rng: &mut RngStream) -> Result<FoldPlan> {
    let n = labels.len();
    if n < 3 {
        return Err(Error::TooFewSamples(format!(
            "rebalanced leave-one-out needs n >= 3, got {n}"
        )));
    }
    if ClassCounts::from_labels(labels).is_single_class() {
        return Err(Error::SingleClass);
    }
    let pos: Vec<usize> = (0..n).filter(|&i| labels[i] == 1).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| labels[i] == 0).collect();
    let folds = (0..n)
        .map(|i| {
            let pool = if labels[i] == 1 { &neg } else { &pos };
            let j = pool[rng.index(pool.len())];
            Fold::new(vec![i], vec![j])
        })
        .collect();
    Ok(FoldPlan { n, folds })
}

/// Rebalanced leave-P-out over stratified groups. Each group's variable
/// members (beyond the guaranteed `t_c` positives and `f_c` negatives) each
/// remove one opposite-label training sample, drawn without replacement
/// within the fold. Training folds hold exactly `T - p + f_c` positives and
/// `F - p + t_c` negatives.
pub fn rlpocv_plan(labels: &[u8], p: usize, rng: &mut RngStream) -> Result<FoldPlan> {
    let n = labels.len();
    let groups = stratified_groups(labels, p, rng)?;
    let counts = ClassCounts::from_labels(labels);
    let (tc, fc) = (
        groups.strata.guaranteed_positives,
        groups.strata.guaranteed_negatives,
    );
    let train_pos = (counts.positives + fc).saturating_sub(p);
    let train_neg = (counts.negatives + tc).saturating_sub(p);
    if train_pos < 1 || train_neg < 1 {
        return Err(Error::TooFewSamples(format!(
            "rebalanced folds would train on {train_pos} positives and {train_neg} negatives"
        )));
    }

    let mut folds = Vec::with_capacity(groups.members.len());
    let mut blocked = vec![false; n];
    for (f, (members, variable)) in groups.members.into_iter().zip(groups.variable).enumerate() {
        for &i in &members {
            blocked[i] = true;
        }
        let mut excluded = Vec::with_capacity(variable.len());
        for &v in &variable {
            let opposite = 1 - labels[v];
            let pool: Vec<usize> = (0..n)
                .filter(|&k| labels[k] == opposite && !blocked[k])
                .collect();
            if pool.is_empty() {
                return Err(Error::InsufficientOppositeClass { fold: f });
            }
            let j = pool[rng.index(pool.len())];
            blocked[j] = true;
            excluded.push(j);
        }
        for &i in members.iter().chain(&excluded) {
            blocked[i] = false;
        }
        excluded.sort_unstable();
        folds.push(Fold::new(members, excluded));
    }
    Ok(FoldPlan { n, folds })
}

pub struct RebalancedLeaveOneOut;

impl Splitter for RebalancedLeaveOneOut {
    fn name(&self) -> &'static str {
        "rloocv"
    }

    fn uses_p(&self) -> bool {
        false
    }

    fn plan(&self, labels: &[u8], _p: usize, rng: &mut RngStream) -> Result<FoldPlan> {
        rloocv_plan(labels, rng)
    }
}

pub struct RebalancedLeavePOut;

impl Splitter for RebalancedLeavePOut {
    fn name(&self) -> &'static str {
        "rlpocv"
    }

    fn plan(&self, labels: &[u8], p: usize, rng: &mut RngStream) -> Result<FoldPlan> {
        rlpocv_plan(labels, p, rng)
    }
}

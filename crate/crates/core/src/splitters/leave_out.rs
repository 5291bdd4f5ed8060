use super::{check_divisible, Splitter};
use crate::error::{Error, Result};
use crate::plan::{Fold, FoldPlan};
use crate::rng::RngStream;

/// Fold `i` tests sample `i`; nothing is excluded.
pub fn loocv_plan(n: usize) -> Result<FoldPlan> {
    if n < 2 {
        return Err(Error::TooFewSamples(format!(
            "leave-one-out needs n >= 2, got {n}"
        )));
    }
    Ok(FoldPlan {
        n,
        folds: (0..n).map(|i| Fold::new(vec![i], Vec::new())).collect(),
    })
}

/// Cuts a uniformly random permutation of `[0, n)` into `n / p` consecutive
/// blocks. Indices inside a fold are sorted.
pub fn lpocv_plan(labels: &[u8], p: usize, rng: &mut RngStream) -> Result<FoldPlan> {
    let n = labels.len();
    check_divisible(n, p)?;
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    let folds = perm
        .chunks(p)
        .map(|block| {
            let mut test = block.to_vec();
            test.sort_unstable();
            Fold::new(test, Vec::new())
        })
        .collect();
    Ok(FoldPlan { n, folds })
}

pub struct LeaveOneOut;

impl Splitter for LeaveOneOut {
    fn name(&self) -> &'static str {
        "loocv"
    }

    fn uses_p(&self) -> bool {
        false
    }

    fn plan(&self, labels: &[u8], _p: usize, _rng: &mut RngStream) -> Result<FoldPlan> {
        loocv_plan(labels.len())
    }
}

pub struct LeavePOut;

impl Splitter for LeavePOut {
    fn name(&self) -> &'static str {
        "lpocv"
    }

    fn plan(&self, labels: &[u8], p: usize, rng: &mut RngStream) -> Result<FoldPlan> {
        lpocv_plan(labels, p, rng)
    }
}

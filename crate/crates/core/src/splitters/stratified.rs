use super::{check_divisible, Splitter};
use crate::dataset::ClassCounts;
use crate::error::{Error, Result};
use crate::plan::{Fold, FoldPlan};
use crate::rng::RngStream;

/// Per-group guaranteed class composition for a P-sized held-out group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StratificationCounts {
    /// Number of held-out groups, `floor(n / p)`.
    pub groups: usize,
    /// Positives every group is guaranteed to hold.
    pub guaranteed_positives: usize,
    /// Negatives every group is guaranteed to hold.
    pub guaranteed_negatives: usize,
    /// Remaining slots per group, filled from the leftovers.
    pub variable_per_group: usize,
}

pub fn stratification_counts(counts: ClassCounts, p: usize) -> Result<StratificationCounts> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let groups = counts.total() / p;
    if groups == 0 {
        return Err(Error::TooFewSamples(format!(
            "n={} is smaller than p={p}",
            counts.total()
        )));
    }
    let tc = counts.positives / groups;
    let fc = counts.negatives / groups;
    Ok(StratificationCounts {
        groups,
        guaranteed_positives: tc,
        guaranteed_negatives: fc,
        variable_per_group: p - (tc + fc),
    })
}

/// Held-out groups plus, for each group, the members beyond its guaranteed
/// `t_c + f_c` (the samples that would shift the training label mean).
pub(crate) struct StratifiedGroups {
    pub strata: StratificationCounts,
    pub members: Vec<Vec<usize>>,
    pub variable: Vec<Vec<usize>>,
}

pub(crate) fn stratified_groups(
    labels: &[u8],
    p: usize,
    rng: &mut RngStream,
) -> Result<StratifiedGroups> {
    let n = labels.len();
    let groups = check_divisible(n, p)?;
    let counts = ClassCounts::from_labels(labels);
    let strata = stratification_counts(counts, p)?;
    debug_assert_eq!(strata.groups, groups);

    let mut pos: Vec<usize> = (0..n).filter(|&i| labels[i] == 1).collect();
    let mut neg: Vec<usize> = (0..n).filter(|&i| labels[i] == 0).collect();
    rng.shuffle(&mut pos);
    rng.shuffle(&mut neg);

    let (tc, fc) = (strata.guaranteed_positives, strata.guaranteed_negatives);
    let mut members: Vec<Vec<usize>> = (0..groups)
        .map(|g| {
            let mut m = Vec::with_capacity(p);
            m.extend_from_slice(&pos[g * tc..(g + 1) * tc]);
            m.extend_from_slice(&neg[g * fc..(g + 1) * fc]);
            m
        })
        .collect();
    let mut variable = vec![Vec::new(); groups];

    // Leftover positives first, then negatives, dealt round-robin over a
    // shuffled group order. Each group ends with exactly p members.
    let mut order: Vec<usize> = (0..groups).collect();
    rng.shuffle(&mut order);
    let leftovers = pos[groups * tc..].iter().chain(&neg[groups * fc..]);
    for (k, &i) in leftovers.enumerate() {
        let g = order[k % groups];
        members[g].push(i);
        variable[g].push(i);
    }
    debug_assert!(members.iter().all(|m| m.len() == p));
    for m in &mut members {
        m.sort_unstable();
    }
    Ok(StratifiedGroups {
        strata,
        members,
        variable,
    })
}

/// Stratified leave-P-out: every group gets `t_c` positives and `f_c`
/// negatives, leftovers are spread one per group.
pub fn stratified_lpocv_plan(labels: &[u8], p: usize, rng: &mut RngStream) -> Result<FoldPlan> {
    let groups = stratified_groups(labels, p, rng)?;
    Ok(FoldPlan {
        n: labels.len(),
        folds: groups
            .members
            .into_iter()
            .map(|m| Fold::new(m, Vec::new()))
            .collect(),
    })
}

pub struct StratifiedLeavePOut;

impl Splitter for StratifiedLeavePOut {
    fn name(&self) -> &'static str {
        "stratified-lpocv"
    }

    fn plan(&self, labels: &[u8], p: usize, rng: &mut RngStream) -> Result<FoldPlan> {
        stratified_lpocv_plan(labels, p, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::training_label_means;
    use crate::rng::derive_stream;

    fn labels(t: usize, f: usize) -> Vec<u8> {
        let mut v = vec![1u8; t];
        v.extend(vec![0u8; f]);
        v
    }

    fn positives_per_fold(plan: &FoldPlan, y: &[u8]) -> Vec<usize> {
        plan.folds
            .iter()
            .map(|f| f.test_indices.iter().filter(|&&i| y[i] == 1).count())
            .collect()
    }

    #[test]
    fn balanced_leave_two_out_is_exact() {
        let y = labels(50, 50);
        let plan = stratified_lpocv_plan(&y, 2, &mut derive_stream(0, 0, 1)).unwrap();
        assert_eq!(plan.len(), 50);
        assert!(positives_per_fold(&plan, &y).iter().all(|&c| c == 1));
        let means = training_label_means(&plan, &y).unwrap();
        assert!(means.iter().all(|&m| m == means[0]));
    }

    #[test]
    fn ten_percent_leave_two_out_is_not_exact() {
        let y = labels(25, 225);
        let counts = stratification_counts(ClassCounts::from_labels(&y), 2).unwrap();
        assert_eq!(
            (
                counts.groups,
                counts.guaranteed_positives,
                counts.guaranteed_negatives
            ),
            (125, 0, 1)
        );
        let plan = stratified_lpocv_plan(&y, 2, &mut derive_stream(0, 0, 1)).unwrap();
        let per = positives_per_fold(&plan, &y);
        assert_eq!(per.iter().filter(|&&c| c == 1).count(), 25);
        assert_eq!(per.iter().filter(|&&c| c == 0).count(), 100);
        let means = training_label_means(&plan, &y).unwrap();
        assert!(means.iter().any(|&m| m != means[0]));
    }

    #[test]
    fn twenty_percent_leave_five_out() {
        let y = labels(50, 200);
        let plan = stratified_lpocv_plan(&y, 5, &mut derive_stream(0, 0, 1)).unwrap();
        assert_eq!(plan.len(), 50);
        assert!(positives_per_fold(&plan, &y).iter().all(|&c| c == 1));
        assert!(plan.folds.iter().all(|f| f.test_indices.len() == 5));
    }

    #[test]
    fn errors() {
        let y = labels(2, 3);
        let mut rng = derive_stream(0, 0, 1);
        assert_eq!(
            stratified_lpocv_plan(&y, 2, &mut rng).unwrap_err().name(),
            "IndivisibleFold"
        );
        assert_eq!(
            stratified_lpocv_plan(&y, 5, &mut rng).unwrap_err().name(),
            "TooFewSamples"
        );
    }
}

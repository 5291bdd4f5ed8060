//! Synthetic datasets and the Monte Carlo runner.

mod grid;
pub mod presets;
mod summary;

pub use grid::{
    dataset_seed, read_records_csv, run_grid, run_grid_streaming, write_records_csv, Cell,
    ExperimentGrid, GridConfig, RecordWriter, ResultRecord, RECORD_HEADER,
};
pub use summary::{
    summarize, write_summary_csv, CellKey, CellSummary, SummaryTest, SUMMARY_HEADER,
};

use crate::dataset::{LabeledDataset, Matrix};
use crate::error::{Error, Result};
use crate::metrics::{Prediction, PredictionSet};
use crate::models::{Learner, PredictorSpec};
use crate::plan::FoldPlan;
use crate::rng::RngStream;

/// Smallest `n >= n_min` divisible by `p`.
pub fn adjust_n(n_min: usize, p: usize) -> usize {
    let p = p.max(1);
    n_min.div_ceil(p) * p
}

/// Number of positives for a balance, rounded half up.
pub fn positive_count(n: usize, balance: f64) -> usize {
    // the epsilon absorbs representation error such as 0.3 * 250 = 74.99...
    (balance * n as f64 + 0.5 + 1e-9).floor() as usize
}

/// Uniform[0, 1) features and exactly `round(balance * n)` positive labels at
/// uniformly shuffled positions. Features are drawn first, row-major, then
/// the label vector is shuffled.
pub fn generate_dataset(
    n: usize,
    d: usize,
    balance: f64,
    rng: &mut RngStream,
) -> Result<LabeledDataset> {
    if !(balance > 0.0 && balance < 1.0) {
        return Err(Error::DegenerateBalance { balance, n });
    }
    let t = positive_count(n, balance);
    if t < 1 || t > n.saturating_sub(1) {
        return Err(Error::DegenerateBalance { balance, n });
    }
    let data: Vec<f64> = (0..n * d).map(|_| rng.uniform()).collect();
    let mut labels = vec![0u8; n];
    labels[..t].fill(1);
    rng.shuffle(&mut labels);
    LabeledDataset::from_binary(Matrix::new(n, d, data)?, labels)
}

/// Fits on each fold's training indices, scores its test indices, and pools
/// the predictions.
pub fn cross_validate(
    dataset: &LabeledDataset,
    plan: &FoldPlan,
    spec: &PredictorSpec,
) -> Result<PredictionSet> {
    let learner = spec.learner()?;
    cross_validate_with(dataset, plan, learner.as_ref())
}

pub fn cross_validate_with(
    dataset: &LabeledDataset,
    plan: &FoldPlan,
    learner: &dyn Learner,
) -> Result<PredictionSet> {
    if plan.n != dataset.len() {
        return Err(Error::ShapeMismatch {
            rows: dataset.len(),
            labels: plan.n,
        });
    }
    let labels = dataset.labels();
    let mut entries = Vec::with_capacity(plan.n);
    for (f, fold) in plan.folds.iter().enumerate() {
        let train_idx = fold.train_indices(plan.n);
        if train_idx.is_empty() {
            return Err(Error::EmptyTrainingSet { fold: f });
        }
        let train = dataset.subset(&train_idx);
        let test = dataset.features().select_rows(&fold.test_indices);
        let model = learner.fit(&train).map_err(|e| e.in_fold(f))?;
        let scores = model.predict(&test).map_err(|e| e.in_fold(f))?;
        for (&index, score) in fold.test_indices.iter().zip(scores) {
            entries.push(Prediction {
                index,
                score,
                label: labels[index],
            });
        }
    }
    PredictionSet::new(entries)
}

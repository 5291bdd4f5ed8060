//! Leave-P-out cross-validation planning with rebalanced variants, rank
//! metrics with fixed tie conventions, and a seeded simulation harness for
//! studying how held-out folds shift the training label mean.
//!
//! The crate is organized around two runtime-selectable strategy families:
//! [`splitters::Splitter`] (fold planners, keyed by scheme name) and
//! [`models::Learner`] (predictors, keyed by model name).

pub mod dataset;
pub mod error;
pub mod io;
pub mod metrics;
pub mod models;
pub mod plan;
pub mod rng;
pub mod simulate;
pub mod splitters;

pub use dataset::{validate_dataset, ClassCounts, LabeledDataset, Matrix, Validation};
pub use error::{Error, Result};
pub use metrics::{
    aupr, auroc, delong_compare, fisher_combine, pr_curve, roc_curve, t_test_one_sample,
    PredictionSet,
};
pub use models::{Learner, ModelRegistry, PredictorSpec};
pub use plan::{training_label_means, Fold, FoldPlan};
pub use rng::{derive_stream, RngStream};
pub use simulate::{
    adjust_n, cross_validate, generate_dataset, run_grid, summarize, ExperimentGrid,
};
pub use splitters::{SchemeKind, SchemeSpec, Splitter, SplitterRegistry};

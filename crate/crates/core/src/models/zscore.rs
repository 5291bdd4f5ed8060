use super::{FittedModel, Learner};
use crate::dataset::{LabeledDataset, Matrix};
use crate::error::Result;

const MIN_STD: f64 = 1e-12;

/// Standardizes `test` scores by the mean and population standard deviation
/// of `train` scores. A degenerate spread (`sigma < 1e-12`) maps every test
/// score to 0.
pub fn standardize_scores(train: &[f64], test: &[f64]) -> Vec<f64> {
    let m = train.len() as f64;
    let mu = train.iter().sum::<f64>() / m;
    let var = train.iter().map(|s| (s - mu) * (s - mu)).sum::<f64>() / m;
    let sigma = var.sqrt();
    if sigma.is_nan() || sigma < MIN_STD {
        return vec![0.0; test.len()];
    }
    test.iter().map(|s| (s - mu) / sigma).collect()
}

/// Scores `test_features` with `model`, z-scored against the model's own
/// predictions on `train`.
pub fn posthoc_standardize(
    model: &dyn FittedModel,
    train: &LabeledDataset,
    test_features: &Matrix,
) -> Result<Vec<f64>> {
    let train_scores = model.predict(train.features())?;
    let test_scores = model.predict(test_features)?;
    Ok(standardize_scores(&train_scores, &test_scores))
}

/// Wraps a learner so its fitted model emits standardized scores.
pub struct ZScoreWrapper {
    inner: Box<dyn Learner>,
}

impl ZScoreWrapper {
    pub fn new(inner: Box<dyn Learner>) -> Self {
        ZScoreWrapper { inner }
    }
}

impl Learner for ZScoreWrapper {
    fn fit(&self, train: &LabeledDataset) -> Result<Box<dyn FittedModel>> {
        let model = self.inner.fit(train)?;
        let train_scores = model.predict(train.features())?;
        Ok(Box::new(Standardized::from_train_scores(
            model,
            &train_scores,
        )))
    }
}

/// A fitted model plus the training-score moments it is standardized by.
pub struct Standardized {
    inner: Box<dyn FittedModel>,
    mean: f64,
    std: f64,
}

impl Standardized {
    pub fn from_train_scores(inner: Box<dyn FittedModel>, train_scores: &[f64]) -> Self {
        let m = train_scores.len() as f64;
        let mean = train_scores.iter().sum::<f64>() / m;
        let std = (train_scores
            .iter()
            .map(|s| (s - mean) * (s - mean))
            .sum::<f64>()
            / m)
            .sqrt();
        Standardized { inner, mean, std }
    }

    pub fn moments(&self) -> (f64, f64) {
        (self.mean, self.std)
    }
}

impl FittedModel for Standardized {
    fn predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        let raw = self.inner.predict(features)?;
        if self.std.is_nan() || self.std < MIN_STD {
            return Ok(vec![0.0; raw.len()]);
        }
        Ok(raw.iter().map(|s| (s - self.mean) / self.std).collect())
    }
}

use super::{FittedModel, Learner};
use crate::dataset::{LabeledDataset, Matrix};
use crate::error::{Error, Result};

/// Stores the training label mean and emits it, or its negation, for every row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanModel {
    pub mean: f64,
    pub negate: bool,
}

impl FittedModel for MeanModel {
    fn predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        let v = if self.negate { -self.mean } else { self.mean };
        Ok(vec![v; features.rows()])
    }
}

fn label_mean(train: &LabeledDataset) -> Result<f64> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet { fold: 0 });
    }
    Ok(train.counts().positives as f64 / train.len() as f64)
}

/// Adversarial dummy: scores every row with minus the training label mean.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegativeMeanPredictor;

impl Learner for NegativeMeanPredictor {
    fn fit(&self, train: &LabeledDataset) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(MeanModel {
            mean: label_mean(train)?,
            negate: true,
        }))
    }
}

/// Scores every row with the training label mean.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanPredictor;

impl Learner for MeanPredictor {
    fn fit(&self, train: &LabeledDataset) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(MeanModel {
            mean: label_mean(train)?,
            negate: false,
        }))
    }
}

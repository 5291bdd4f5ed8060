//! Predictors evaluated under cross-validation.
//!
//! A [`Learner`] fits on a training [`LabeledDataset`] and returns a boxed
//! [`FittedModel`]. Learners are described declaratively by a
//! [`PredictorSpec`] (`negmean`, `mean`, `logistic:lambda=1`, `knn:k=5`, with
//! an optional `+zscore` suffix) and built through a [`ModelRegistry`].

mod dummy;
mod knn;
mod logistic;
mod zscore;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use dummy::{MeanModel, MeanPredictor, NegativeMeanPredictor};
pub use knn::{KnnModel, NearestNeighbors};
pub use logistic::{LogisticModel, LogisticRegression, SolverOptions, SINGLE_CLASS_INTERCEPT};
pub use zscore::{posthoc_standardize, standardize_scores, Standardized, ZScoreWrapper};

use crate::dataset::{LabeledDataset, Matrix};
use crate::error::{Error, Result};

/// A trained model. Immutable; safe to share between threads.
pub trait FittedModel: Send + Sync {
    fn predict(&self, features: &Matrix) -> Result<Vec<f64>>;
}

/// A model family with fixed hyperparameters.
pub trait Learner: Send + Sync {
    fn fit(&self, train: &LabeledDataset) -> Result<Box<dyn FittedModel>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    NegativeMean,
    Mean,
    Logistic,
    Knn,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::NegativeMean => "negmean",
            ModelKind::Mean => "mean",
            ModelKind::Logistic => "logistic",
            ModelKind::Knn => "knn",
        }
    }
}

/// Declarative model description.
///
/// `lambda` is the L2 regularization *strength* on the mean log-loss (larger
/// means more shrinkage); for tooling parameterized by `C`, `lambda = 1 / C`
/// up to the loss normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorSpec {
    pub kind: ModelKind,
    pub lambda: f64,
    pub k: usize,
    pub posthoc_zscore: bool,
}

impl PredictorSpec {
    pub fn negative_mean() -> Self {
        PredictorSpec {
            kind: ModelKind::NegativeMean,
            lambda: 0.0,
            k: 1,
            posthoc_zscore: false,
        }
    }

    pub fn mean() -> Self {
        PredictorSpec {
            kind: ModelKind::Mean,
            ..Self::negative_mean()
        }
    }

    pub fn logistic(lambda: f64) -> Self {
        PredictorSpec {
            kind: ModelKind::Logistic,
            lambda,
            ..Self::negative_mean()
        }
    }

    pub fn knn(k: usize) -> Self {
        PredictorSpec {
            kind: ModelKind::Knn,
            k,
            ..Self::negative_mean()
        }
    }

    pub fn with_zscore(mut self) -> Self {
        self.posthoc_zscore = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be >= 1".into()));
        }
        Ok(())
    }

    /// Builds the learner with the built-in registry.
    pub fn learner(&self) -> Result<Box<dyn Learner>> {
        ModelRegistry::builtin().build(self)
    }

    /// `lambda` if this spec is a logistic model, for record keeping.
    pub fn lambda_value(&self) -> Option<f64> {
        (self.kind == ModelKind::Logistic).then_some(self.lambda)
    }
}

impl fmt::Display for PredictorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::Logistic => write!(f, "logistic:lambda={}", self.lambda)?,
            ModelKind::Knn => write!(f, "knn:k={}", self.k)?,
            kind => f.write_str(kind.name())?,
        }
        if self.posthoc_zscore {
            f.write_str("+zscore")?;
        }
        Ok(())
    }
}

impl FromStr for PredictorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, zscore) = match s.strip_suffix("+zscore") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let (name, params) = match body.split_once(':') {
            Some((n, p)) => (n.trim(), p),
            None => (body.trim(), ""),
        };
        let mut params_map = BTreeMap::new();
        for kv in params.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in '{kv}'")))?;
            params_map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        let take_f64 = |key: &str, default: f64| -> Result<f64> {
            params_map.get(key).map_or(Ok(default), |v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad value for {key}: '{v}'")))
            })
        };
        let take_usize = |key: &str, default: usize| -> Result<usize> {
            params_map.get(key).map_or(Ok(default), |v| {
                v.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad value for {key}: '{v}'")))
            })
        };
        let allow = |keys: &[&str]| -> Result<()> {
            match params_map.keys().find(|k| !keys.contains(&k.as_str())) {
                Some(k) => Err(Error::Parse(format!(
                    "unknown parameter '{k}' for model '{name}'"
                ))),
                None => Ok(()),
            }
        };
        let mut spec = match name.to_ascii_lowercase().as_str() {
            "negmean" | "negative-mean" | "negative_mean" => {
                allow(&[])?;
                PredictorSpec::negative_mean()
            }
            "mean" => {
                allow(&[])?;
                PredictorSpec::mean()
            }
            "logistic" | "logreg" => {
                allow(&["lambda"])?;
                PredictorSpec::logistic(take_f64("lambda", 1.0)?)
            }
            "knn" => {
                allow(&["k"])?;
                PredictorSpec::knn(take_usize("k", 5)?)
            }
            _ => return Err(Error::Parse(format!("unknown model '{name}'"))),
        };
        spec.posthoc_zscore = zscore;
        spec.validate()?;
        Ok(spec)
    }
}

impl serde::Serialize for PredictorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PredictorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

type Factory = Box<dyn Fn(&PredictorSpec) -> Result<Box<dyn Learner>> + Send + Sync>;

/// Name-keyed learner factories. The `+zscore` wrapper is applied on top of
/// whatever the factory returns.
pub struct ModelRegistry {
    factories: BTreeMap<&'static str, Factory>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(
            ModelKind::NegativeMean.name(),
            Box::new(|_| Ok(Box::new(NegativeMeanPredictor))),
        );
        reg.register(
            ModelKind::Mean.name(),
            Box::new(|_| Ok(Box::new(MeanPredictor))),
        );
        reg.register(
            ModelKind::Logistic.name(),
            Box::new(|s| Ok(Box::new(LogisticRegression::new(s.lambda)))),
        );
        reg.register(
            ModelKind::Knn.name(),
            Box::new(|s| Ok(Box::new(NearestNeighbors::new(s.k)))),
        );
        reg
    }

    pub fn register(&mut self, name: &'static str, factory: Factory) {
        self.factories.insert(name, factory);
    }

    pub fn build(&self, spec: &PredictorSpec) -> Result<Box<dyn Learner>> {
        spec.validate()?;
        let factory = self.factories.get(spec.kind.name()).ok_or_else(|| {
            Error::Parse(format!("no model registered as '{}'", spec.kind.name()))
        })?;
        let inner = factory(spec)?;
        Ok(if spec.posthoc_zscore {
            Box::new(ZScoreWrapper::new(inner))
        } else {
            inner
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

pub(crate) fn check_dim(expected: usize, features: &Matrix) -> Result<()> {
    if features.cols() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: features.cols(),
        });
    }
    Ok(())
}

//! Grids behind each reproduced figure.
//!
//! | name  | schemes                    | p            | models                                   |
//! |-------|----------------------------|--------------|------------------------------------------|
//! | `1c`  | lpocv                      | 1,2,4,5,10,20,25,50,100 | negmean                       |
//! | `2a`  | loocv                      | 1            | logistic (lambda 1)                      |
//! | `2b`  | stratified-lpocv           | 5            | logistic (lambda 1)                      |
//! | `2c`  | stratified-lpocv           | 1..=10       | logistic (lambda 1)                      |
//! | `3bc` | rloocv                     | 1            | negmean, logistic (lambda 1)             |
//! | `5ab` | loocv, rloocv              | 1            | logistic, 13 lambdas 1e-6..1e6           |
//! | `s2`  | loocv, lpocv               | 1, 4         | negmean, mean                            |
//! | `s5`  | loocv                      | 1            | logistic+zscore, knn k=1 +zscore         |
//!
//! All presets sweep balances 0.1 to 0.9 in steps of 0.1 with `n_min = 250`
//! and 20 features.

use super::grid::ExperimentGrid;
use crate::error::{Error, Result};
use crate::models::PredictorSpec;
use crate::splitters::SchemeKind;

pub const FIGURES: [&str; 8] = ["1c", "2a", "2b", "2c", "3bc", "5ab", "s2", "s5"];

pub const BALANCES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Default logistic lambda for the preset grids.
pub const DEFAULT_LAMBDA: f64 = 1.0;

/// Thirteen log-spaced strengths, 1e-6 through 1e6.
pub fn lambda_sweep() -> Vec<f64> {
    (-6..=6)
        .map(|k| format!("1e{k}").parse().expect("literal"))
        .collect()
}

pub fn figure_grid(name: &str, replicates: usize, base_seed: u64) -> Result<ExperimentGrid> {
    let logistic = PredictorSpec::logistic(DEFAULT_LAMBDA);
    let (schemes, p_values, models, lambdas) = match name.to_ascii_lowercase().as_str() {
        "1c" => (
            vec![SchemeKind::Lpocv],
            vec![1, 2, 4, 5, 10, 20, 25, 50, 100],
            vec![PredictorSpec::negative_mean()],
            None,
        ),
        "2a" => (vec![SchemeKind::Loocv], vec![1], vec![logistic], None),
        "2b" => (
            vec![SchemeKind::StratifiedLpocv],
            vec![5],
            vec![logistic],
            None,
        ),
        "2c" => (
            vec![SchemeKind::StratifiedLpocv],
            (1..=10).collect(),
            vec![logistic],
            None,
        ),
        "3bc" => (
            vec![SchemeKind::Rloocv],
            vec![1],
            vec![PredictorSpec::negative_mean(), logistic],
            None,
        ),
        "5ab" => (
            vec![SchemeKind::Loocv, SchemeKind::Rloocv],
            vec![1],
            vec![logistic],
            Some(lambda_sweep()),
        ),
        "s2" => (
            vec![SchemeKind::Loocv, SchemeKind::Lpocv],
            vec![4],
            vec![PredictorSpec::negative_mean(), PredictorSpec::mean()],
            None,
        ),
        "s5" => (
            vec![SchemeKind::Loocv],
            vec![1],
            vec![logistic.with_zscore(), PredictorSpec::knn(1).with_zscore()],
            None,
        ),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure '{other}', expected one of {}",
                FIGURES.join(", ")
            )))
        }
    };
    Ok(ExperimentGrid {
        schemes,
        p_values,
        balances: BALANCES.to_vec(),
        models,
        lambdas,
        n_min: 250,
        n_features: 20,
        replicates,
        base_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for f in FIGURES {
            figure_grid(f, 3, 0).unwrap().validate().unwrap();
        }
        assert!(figure_grid("4a", 3, 0).is_err());
    }

    #[test]
    fn lambda_sweep_endpoints() {
        let l = lambda_sweep();
        assert_eq!(l.len(), 13);
        assert_eq!(l[0], 1e-6);
        assert_eq!(l[6], 1.0);
        assert_eq!(l[12], 1e6);
    }

    #[test]
    fn fig_1c_contains_reported_cells() {
        let cells = figure_grid("1c", 1, 0).unwrap().cells();
        assert!(cells.iter().any(|c| c.scheme.p == 4 && c.balance == 0.1));
        assert!(cells.iter().any(|c| c.scheme.p == 100 && c.balance == 0.5));
    }

    #[test]
    fn fig_3bc_is_rloocv_only() {
        let cells = figure_grid("3bc", 5, 0).unwrap().cells();
        assert!(cells.iter().all(|c| c.scheme.kind == SchemeKind::Rloocv));
        assert_eq!(cells.len(), 18);
    }
}

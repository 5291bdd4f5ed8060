use serde::{Deserialize, Serialize};

use super::special::{chi2_sf, student_t_cdf, student_t_sf};
use crate::error::{Error, Result};

/// Reported p-values never go below this.
pub const P_VALUE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    #[serde(rename = "two-sided")]
    TwoSided,
    #[serde(rename = "less")]
    Less,
    #[serde(rename = "greater")]
    Greater,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub alternative: Alternative,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

pub(crate) fn floor_p(p: f64) -> f64 {
    p.clamp(P_VALUE_FLOOR, 1.0)
}

/// One-sample Student t-test of `mean(values) = mu0`.
pub fn t_test_one_sample(values: &[f64], mu0: f64, alternative: Alternative) -> Result<TestResult> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewValues { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0);
    if var.is_nan() || var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let t = (mean - mu0) / (var / nf).sqrt();
    let df = nf - 1.0;
    let p = match alternative {
        Alternative::Less => student_t_cdf(t, df),
        Alternative::Greater => student_t_sf(t, df),
        Alternative::TwoSided => 2.0 * student_t_sf(t.abs(), df),
    };
    Ok(TestResult {
        statistic: t,
        p_value: floor_p(p),
        alternative,
        df: Some(df),
        n: Some(n),
    })
}

/// Fisher's method: `X = -2 * sum(ln p_i)` against chi-squared with `2k` df.
pub fn fisher_combine(p_values: &[f64]) -> Result<TestResult> {
    if p_values.is_empty() {
        return Err(Error::TooFewValues { needed: 1, got: 0 });
    }
    if let Some(&bad) = p_values.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
        return Err(Error::InvalidP(bad));
    }
    let x = -2.0 * p_values.iter().map(|p| p.ln()).sum::<f64>();
    let df = 2.0 * p_values.len() as f64;
    Ok(TestResult {
        statistic: x,
        p_value: floor_p(chi2_sf(x, df)),
        alternative: Alternative::Greater,
        df: Some(df),
        n: Some(p_values.len()),
    })
}

use std::io::Write;

use super::grid::ResultRecord;
use crate::error::Result;
use crate::metrics::{t_test_one_sample, Alternative};
use crate::splitters::SchemeKind;

pub const SUMMARY_HEADER: &str =
    "scheme,p,balance,model,lambda,mean_auroc,std_auroc,t,p_two_sided,p_less,n_reps";

#[derive(Debug, Clone, PartialEq)]
pub struct CellKey {
    pub scheme: SchemeKind,
    pub p: usize,
    pub balance: f64,
    pub model: String,
    pub lambda: Option<f64>,
}

impl CellKey {
    fn of(r: &ResultRecord) -> Self {
        CellKey {
            scheme: r.scheme,
            p: r.p,
            balance: r.balance,
            model: r.model.clone(),
            lambda: r.lambda,
        }
    }
}

/// t-test of the cell's auROCs against 0.5, or why it could not be run.
#[derive(Debug, Clone, PartialEq)]
pub enum SummaryTest {
    Tested {
        t: f64,
        p_two_sided: f64,
        p_less: f64,
    },
    Degenerate(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub key: CellKey,
    pub mean_auroc: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single record.
    pub std_auroc: f64,
    pub n_reps: usize,
    pub test: SummaryTest,
}

/// Per-cell mean, spread and t-tests vs 0.5, in order of first appearance.
/// Failed records are skipped.
pub fn summarize(records: &[ResultRecord]) -> Vec<CellSummary> {
    let mut keys: Vec<CellKey> = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for r in records {
        let key = CellKey::of(r);
        let slot = match keys.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                keys.push(key);
                values.push(Vec::new());
                keys.len() - 1
            }
        };
        if let Some(a) = r.auroc() {
            values[slot].push(a);
        }
    }
    keys.into_iter()
        .zip(values)
        .map(|(key, v)| {
            let n = v.len();
            let mean = if n > 0 {
                v.iter().sum::<f64>() / n as f64
            } else {
                f64::NAN
            };
            let std = if n > 1 {
                (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0)).sqrt()
            } else {
                0.0
            };
            let test = match (
                t_test_one_sample(&v, 0.5, Alternative::TwoSided),
                t_test_one_sample(&v, 0.5, Alternative::Less),
            ) {
                (Ok(two), Ok(less)) => SummaryTest::Tested {
                    t: two.statistic,
                    p_two_sided: two.p_value,
                    p_less: less.p_value,
                },
                (Err(e), _) | (_, Err(e)) => SummaryTest::Degenerate(e.name()),
            };
            CellSummary {
                key,
                mean_auroc: mean,
                std_auroc: std,
                n_reps: n,
                test,
            }
        })
        .collect()
}

/// CSV with [`SUMMARY_HEADER`]; degenerate tests leave `t` empty and mark
/// both p-values `degenerate`.
pub fn write_summary_csv<W: Write>(summaries: &[CellSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER.split(','))?;
    for s in summaries {
        let (t, p2, pl) = match s.test {
            SummaryTest::Tested {
                t,
                p_two_sided,
                p_less,
            } => (t.to_string(), p_two_sided.to_string(), p_less.to_string()),
            SummaryTest::Degenerate(_) => (String::new(), "degenerate".into(), "degenerate".into()),
        };
        w.write_record([
            s.key.scheme.name().to_string(),
            s.key.p.to_string(),
            s.key.balance.to_string(),
            s.key.model.clone(),
            s.key.lambda.map(|l| l.to_string()).unwrap_or_default(),
            s.mean_auroc.to_string(),
            s.std_auroc.to_string(),
            t,
            p2,
            pl,
            s.n_reps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

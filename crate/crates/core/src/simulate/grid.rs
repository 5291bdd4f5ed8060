use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{adjust_n, cross_validate, generate_dataset};
use crate::error::{Error, Result};
use crate::metrics::{aupr, auroc};
use crate::models::{ModelKind, PredictorSpec};
use crate::rng::{derive_stream, mix64, tags};
use crate::splitters::{SchemeKind, SchemeSpec};

pub const RECORD_HEADER: &str = "scheme,p,balance,model,lambda,replicate,seed,n,auroc,aupr";

fn default_n_min() -> usize {
    250
}
fn default_features() -> usize {
    20
}
fn default_replicates() -> usize {
    100
}
fn default_p_values() -> Vec<usize> {
    vec![1]
}

/// A simulation grid. Deserializes from JSON with the defaults
/// `n_min = 250`, `n_features = 20`, `replicates = 100`, `p_values = [1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGrid {
    pub schemes: Vec<SchemeKind>,
    #[serde(default = "default_p_values")]
    pub p_values: Vec<usize>,
    pub balances: Vec<f64>,
    pub models: Vec<PredictorSpec>,
    /// When present, every logistic model is expanded once per value.
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default = "default_n_min")]
    pub n_min: usize,
    #[serde(default = "default_features")]
    pub n_features: usize,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub base_seed: u64,
}

pub type GridConfig = ExperimentGrid;

/// One (scheme, p, balance, model) combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub scheme: SchemeSpec,
    pub balance: f64,
    pub model: PredictorSpec,
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.schemes.is_empty() || self.balances.is_empty() || self.models.is_empty() {
            return bad("grid needs at least one scheme, balance and model".into());
        }
        if self.replicates < 1 {
            return bad("replicates must be >= 1".into());
        }
        if self.n_min < 2 {
            return bad("n_min must be >= 2".into());
        }
        if let Some(b) = self.balances.iter().find(|&&b| !(b > 0.0 && b < 1.0)) {
            return bad(format!("balance {b} is outside (0, 1)"));
        }
        if self.p_values.contains(&0) {
            return bad("p values must be >= 1".into());
        }
        if self.p_values.is_empty() && self.schemes.iter().any(|s| !s.fixed_p()) {
            return bad("leave-P-out schemes need at least one p value".into());
        }
        if let Some(l) = self
            .lambdas
            .iter()
            .flatten()
            .find(|&&l| !(l >= 0.0 && l.is_finite()))
        {
            return bad(format!("lambda {l} must be finite and >= 0"));
        }
        for m in &self.models {
            m.validate()?;
        }
        Ok(())
    }

    fn expanded_models(&self) -> Vec<PredictorSpec> {
        let mut out = Vec::new();
        for m in &self.models {
            match (&self.lambdas, m.kind) {
                (Some(ls), ModelKind::Logistic) => {
                    out.extend(ls.iter().map(|&lambda| PredictorSpec { lambda, ..*m }))
                }
                _ => out.push(*m),
            }
        }
        out
    }

    /// Cells in output order: scheme, p, balance, model.
    pub fn cells(&self) -> Vec<Cell> {
        let models = self.expanded_models();
        let mut cells = Vec::new();
        for &kind in &self.schemes {
            let ps: Vec<usize> = if kind.fixed_p() {
                vec![1]
            } else {
                self.p_values.clone()
            };
            for p in ps {
                let scheme = SchemeSpec { kind, p };
                for &balance in &self.balances {
                    for &model in &models {
                        cells.push(Cell {
                            scheme,
                            balance,
                            model,
                        });
                    }
                }
            }
        }
        cells
    }
}

/// Seed shared by every cell that simulates the same kind of dataset, so
/// schemes and models added to a grid see identical data.
pub fn dataset_seed(base_seed: u64, n: usize, d: usize, balance: f64) -> u64 {
    mix64(mix64(mix64(base_seed ^ n as u64) ^ d as u64) ^ balance.to_bits())
}

/// One (cell, replicate) measurement. Failed replicates keep the error and
/// leave both metrics empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub scheme: SchemeKind,
    pub p: usize,
    pub balance: f64,
    pub model: String,
    pub lambda: Option<f64>,
    pub replicate: usize,
    pub seed: u64,
    pub n: usize,
    pub outcome: std::result::Result<(f64, f64), String>,
}

impl ResultRecord {
    pub fn auroc(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|m| m.0)
    }

    pub fn aupr(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|m| m.1)
    }

    fn csv_fields(&self) -> [String; 10] {
        let (a, p) = match &self.outcome {
            Ok((a, p)) => (a.to_string(), p.to_string()),
            Err(_) => (String::new(), String::new()),
        };
        [
            self.scheme.name().to_string(),
            self.p.to_string(),
            self.balance.to_string(),
            self.model.clone(),
            self.lambda.map(|l| l.to_string()).unwrap_or_default(),
            self.replicate.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            a,
            p,
        ]
    }
}

fn run_task(grid: &ExperimentGrid, cell: &Cell, replicate: usize) -> ResultRecord {
    let n = adjust_n(grid.n_min, cell.scheme.p);
    let seed = dataset_seed(grid.base_seed, n, grid.n_features, cell.balance);
    let outcome = (|| {
        let mut data_rng = derive_stream(seed, replicate as u64, tags::DATA);
        let dataset = generate_dataset(n, grid.n_features, cell.balance, &mut data_rng)?;
        let mut plan_rng = derive_stream(seed, replicate as u64, tags::PLAN);
        let plan = cell.scheme.plan(dataset.labels(), &mut plan_rng)?;
        let preds = cross_validate(&dataset, &plan, &cell.model)?;
        Ok::<_, Error>((auroc(&preds)?, aupr(&preds)?))
    })()
    .map_err(|e| format!("{}: {e}", e.name()));
    ResultRecord {
        scheme: cell.scheme.kind,
        p: cell.scheme.p,
        balance: cell.balance,
        model: cell.model.to_string(),
        lambda: cell.model.lambda_value(),
        replicate,
        seed,
        n,
        outcome,
    }
}

const CHUNK: usize = 512;

/// Runs every (cell, replicate) task and hands records to `emit` in
/// (cell, replicate) order, independent of scheduling. `jobs` bounds the
/// worker count; `None` uses the global pool.
pub fn run_grid_streaming<F>(grid: &ExperimentGrid, jobs: Option<usize>, mut emit: F) -> Result<()>
where
    F: FnMut(ResultRecord) -> Result<()>,
{
    grid.validate()?;
    let cells = grid.cells();
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..grid.replicates).map(move |r| (c, r)))
        .collect();
    let pool = match jobs {
        Some(j) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?,
        ),
        None => None,
    };
    let compute = |chunk: &[(usize, usize)]| -> Vec<ResultRecord> {
        chunk
            .par_iter()
            .map(|&(c, r)| run_task(grid, &cells[c], r))
            .collect()
    };
    for chunk in tasks.chunks(CHUNK) {
        let records = match &pool {
            Some(pool) => pool.install(|| compute(chunk)),
            None => compute(chunk),
        };
        for rec in records {
            emit(rec)?;
        }
    }
    Ok(())
}

pub fn run_grid(grid: &ExperimentGrid, jobs: Option<usize>) -> Result<Vec<ResultRecord>> {
    let mut out = Vec::new();
    run_grid_streaming(grid, jobs, |r| {
        out.push(r);
        Ok(())
    })?;
    Ok(out)
}

/// Incremental CSV writer for records.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(RECORD_HEADER.split(','))?;
        Ok(RecordWriter { inner })
    }

    pub fn write(&mut self, rec: &ResultRecord) -> Result<()> {
        self.inner.write_record(rec.csv_fields())?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

pub fn write_records_csv<W: Write>(records: &[ResultRecord], out: W) -> Result<()> {
    let mut w = RecordWriter::new(out)?;
    for r in records {
        w.write(r)?;
    }
    w.finish()
}

/// Reads records written by [`RecordWriter`]. Rows with empty metrics come
/// back as failed records.
pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<ResultRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != RECORD_HEADER {
        return Err(Error::Parse(format!("expected header '{RECORD_HEADER}'")));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let parse_err = |what: &str| Error::Parse(format!("record {}: bad {what}", line + 1));
        let num = |i: usize, what: &str| field(i).parse::<f64>().map_err(|_| parse_err(what));
        let outcome = if field(8).is_empty() {
            Err("failed".to_string())
        } else {
            Ok((num(8, "auroc")?, num(9, "aupr")?))
        };
        out.push(ResultRecord {
            scheme: field(0).parse()?,
            p: field(1).parse().map_err(|_| parse_err("p"))?,
            balance: num(2, "balance")?,
            model: field(3).to_string(),
            lambda: if field(4).is_empty() {
                None
            } else {
                Some(num(4, "lambda")?)
            },
            replicate: field(5).parse().map_err(|_| parse_err("replicate"))?,
            seed: field(6).parse().map_err(|_| parse_err("seed"))?,
            n: field(7).parse().map_err(|_| parse_err("n"))?,
            outcome,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> ExperimentGrid {
        ExperimentGrid {
            schemes: vec![SchemeKind::Loocv],
            p_values: vec![1],
            balances: vec![0.3],
            models: vec![PredictorSpec::negative_mean()],
            lambdas: None,
            n_min: 30,
            n_features: 2,
            replicates: 3,
            base_seed: 5,
        }
    }

    #[test]
    fn one_cell_three_replicates() {
        let recs = run_grid(&small_grid(), Some(2)).unwrap();
        assert_eq!(
            recs.iter().map(|r| r.replicate).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert!(recs.iter().all(|r| r.auroc() == Some(1.0)));
    }

    #[test]
    fn csv_is_stable_across_job_counts() {
        let mut g = small_grid();
        g.schemes.push(SchemeKind::Lpocv);
        g.p_values = vec![3, 5];
        g.models.push(PredictorSpec::logistic(1.0));
        let mut a = Vec::new();
        write_records_csv(&run_grid(&g, Some(1)).unwrap(), &mut a).unwrap();
        let mut b = Vec::new();
        write_records_csv(&run_grid(&g, Some(4)).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with(RECORD_HEADER));
        let back = read_records_csv(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 3 * (2 + 2 * 2));
        let mut again = Vec::new();
        write_records_csv(&back, &mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), text);
    }

    #[test]
    fn lambda_expansion_and_fixed_p() {
        let mut g = small_grid();
        g.schemes = vec![SchemeKind::Rloocv, SchemeKind::StratifiedLpocv];
        g.p_values = vec![2, 5];
        g.models = vec![PredictorSpec::logistic(1.0), PredictorSpec::negative_mean()];
        g.lambdas = Some(vec![0.1, 10.0]);
        let cells = g.cells();
        // rloocv: 1 p; stratified: 2 p; each with 3 models
        assert_eq!(cells.len(), 3 * 3);
        assert_eq!(cells[0].scheme.p, 1);
        assert_eq!(cells[0].model.lambda, 0.1);
        assert_eq!(cells[1].model.lambda, 10.0);
    }

    #[test]
    fn failures_become_error_records() {
        let mut g = small_grid();
        g.n_min = 4;
        g.balances = vec![0.1]; // rounds to zero positives
        let recs = run_grid(&g, None).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r
            .outcome
            .as_ref()
            .unwrap_err()
            .starts_with("DegenerateBalance")));
        let mut buf = Vec::new();
        write_records_csv(&recs, &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .lines()
            .nth(1)
            .unwrap()
            .ends_with(",,"));
    }

    #[test]
    fn grid_json_defaults() {
        let g: ExperimentGrid = serde_json::from_str(
            r#"{"schemes":["rloocv"],"balances":[0.5],"models":["logistic:lambda=1"]}"#,
        )
        .unwrap();
        assert_eq!(
            (g.n_min, g.n_features, g.replicates, g.base_seed),
            (250, 20, 100, 0)
        );
        assert_eq!(g.models[0], PredictorSpec::logistic(1.0));
        assert!(g.validate().is_ok());
    }

    #[test]
    fn invalid_grids() {
        let mut g = small_grid();
        g.balances = vec![1.2];
        assert!(g.validate().is_err());
        let mut g = small_grid();
        g.replicates = 0;
        assert!(run_grid(&g, None).is_err());
    }
}

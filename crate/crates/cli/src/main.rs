use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rxval_core::io::read_predictions_csv;
use rxval_core::metrics::{pr_curve, roc_curve};
use rxval_core::rng::{derive_stream, tags};
use rxval_core::simulate::presets::figure_grid;
use rxval_core::simulate::{
    read_records_csv, run_grid_streaming, write_summary_csv, CellSummary, RecordWriter,
    ResultRecord, SummaryTest,
};
use rxval_core::{
    delong_compare, fisher_combine, summarize, Error, ExperimentGrid, LabeledDataset,
    PredictorSpec, Result, SchemeKind, SchemeSpec,
};

#[derive(Parser)]
#[command(name = "rxval", version)]
#[command(about = "Cross-validation planning, rank metrics and bias simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a fold plan (JSON) for the labels in a CSV file
    Split(SplitArgs),
    /// Compute auROC/auPR for a predictions file
    Evaluate(EvaluateArgs),
    /// DeLong comparison of paired prediction files
    Compare(CompareArgs),
    /// Run a simulation grid and stream per-replicate records
    Simulate(SimulateArgs),
    /// Summarize a records file
    Report(ReportArgs),
}

#[derive(Args)]
struct SplitArgs {
    /// CSV with a `label` column (dataset or predictions file)
    input: PathBuf,
    #[arg(long)]
    scheme: SchemeKind,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, env = "RXVAL_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// CSV with columns sample_id,label,score
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    roc_out: Option<PathBuf>,
    #[arg(long)]
    pr_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Prediction files taken in pairs: A1 B1 [A2 B2 ...]
    #[arg(required = true, num_args = 2..)]
    inputs: Vec<PathBuf>,
    /// Also combine the pair p-values with Fisher's method
    #[arg(long)]
    fisher: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Preset grid
    #[arg(long, conflicts_with = "config")]
    figure: Option<String>,
    /// Grid as JSON
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    scheme: Vec<SchemeKind>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<usize>,
    #[arg(long, alias = "balance", value_delimiter = ',')]
    balances: Vec<f64>,
    /// Predictor, e.g. `negmean`, `logistic:lambda=1`, `knn:k=1+zscore`
    #[arg(long)]
    model: Vec<PredictorSpec>,
    #[arg(long, alias = "lambda", value_delimiter = ',')]
    lambdas: Vec<f64>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    features: Option<usize>,
    #[arg(long, env = "RXVAL_SEED")]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Records CSV (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-cell summary CSV here
    #[arg(long)]
    summarize: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    input: PathBuf,
    /// Summary CSV (default: stdout, with the table on stderr)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Split(a) => split(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Compare(a) => compare(a),
        Command::Simulate(a) => simulate(a),
        Command::Report(a) => report(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(if e.is_io() { 1 } else { 2 })
        }
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    let mut w = sink(path)?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

fn read_labels(path: &Path) -> Result<Vec<u8>> {
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let col = rdr
        .headers()?
        .iter()
        .position(|h| h.trim() == "label")
        .ok_or_else(|| Error::Parse(format!("{}: no 'label' column", path.display())))?;
    let mut labels = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let raw = row.get(col).unwrap_or("").trim();
        let v = raw.parse::<i64>().map_err(|_| {
            Error::Parse(format!("row {}: label '{raw}' is not an integer", line + 1))
        })?;
        labels.push(v);
    }
    Ok(LabeledDataset::labels_only(labels, None)?.labels().to_vec())
}

/// The plan stream for `--seed s` is replicate 0 of the plan stream of `s`.
fn split(a: SplitArgs) -> Result<()> {
    let labels = read_labels(&a.input)?;
    let spec = SchemeSpec::new(a.scheme, a.p)?;
    let plan = spec.plan(&labels, &mut derive_stream(a.seed, 0, tags::PLAN))?;
    write_text(a.out.as_deref(), &plan.to_json())
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let preds = read_predictions_csv(open(&a.input)?)?.to_prediction_set()?;
    let roc = roc_curve(&preds)?;
    let pr = pr_curve(&preds)?;
    let counts = preds.counts();
    if let Some(p) = &a.roc_out {
        roc.write_csv(sink(Some(p))?)?;
    }
    if let Some(p) = &a.pr_out {
        pr.write_csv(sink(Some(p))?)?;
    }
    let out = json!({
        "auroc": roc.area(),
        "aupr": pr.area(),
        "n": preds.len(),
        "t_pos": counts.positives,
        "t_neg": counts.negatives,
    });
    write_text(a.out.as_deref(), &serde_json::to_string_pretty(&out)?)
}

fn compare(a: CompareArgs) -> Result<()> {
    if !a.inputs.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "compare takes prediction files in pairs, got {}",
            a.inputs.len()
        )));
    }
    let mut pairs = Vec::new();
    let mut p_values = Vec::new();
    for pair in a.inputs.chunks(2) {
        let x = read_predictions_csv(open(&pair[0])?)?;
        let y = read_predictions_csv(open(&pair[1])?)?;
        if x.sample_ids != y.sample_ids {
            return Err(Error::MisalignedLabels(format!(
                "{} and {} list different sample ids",
                pair[0].display(),
                pair[1].display()
            )));
        }
        if x.labels != y.labels {
            return Err(Error::MisalignedLabels(format!(
                "{} and {} disagree on labels",
                pair[0].display(),
                pair[1].display()
            )));
        }
        let r = delong_compare(&x.scores, &y.scores, &x.labels)?;
        p_values.push(r.test.p_value);
        let mut v = serde_json::to_value(&r)?;
        v["a"] = json!(pair[0].display().to_string());
        v["b"] = json!(pair[1].display().to_string());
        pairs.push(v);
    }
    let mut out = json!({ "pairs": pairs });
    if a.fisher {
        out["fisher"] = serde_json::to_value(fisher_combine(&p_values)?)?;
    }
    write_text(a.out.as_deref(), &serde_json::to_string_pretty(&out)?)
}

fn build_grid(a: &SimulateArgs) -> Result<ExperimentGrid> {
    let mut grid = if let Some(name) = &a.figure {
        figure_grid(name, a.replicates.unwrap_or(100), a.seed.unwrap_or(0))?
    } else if let Some(path) = &a.config {
        let mut text = String::new();
        open(path)?.read_to_string(&mut text)?;
        serde_json::from_str(&text)?
    } else {
        if a.scheme.is_empty() || a.balances.is_empty() || a.model.is_empty() {
            return Err(Error::InvalidArgument(
                "simulate needs --figure, --config, or --scheme, --balances and --model".into(),
            ));
        }
        ExperimentGrid {
            schemes: a.scheme.clone(),
            p_values: if a.p.is_empty() { vec![1] } else { a.p.clone() },
            balances: a.balances.clone(),
            models: a.model.clone(),
            lambdas: None,
            n_min: 250,
            n_features: 20,
            replicates: 100,
            base_seed: 0,
        }
    };
    if a.figure.is_none() {
        if let Some(r) = a.replicates {
            grid.replicates = r;
        }
        if let Some(s) = a.seed {
            grid.base_seed = s;
        }
    }
    if !a.lambdas.is_empty() {
        grid.lambdas = Some(a.lambdas.clone());
    }
    if let Some(n) = a.n_min {
        grid.n_min = n;
    }
    if let Some(d) = a.features {
        grid.n_features = d;
    }
    grid.validate()?;
    Ok(grid)
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let grid = build_grid(&a)?;
    let mut writer = RecordWriter::new(sink(a.out.as_deref())?)?;
    let mut kept: Vec<ResultRecord> = Vec::new();
    let keep = a.summarize.is_some();
    run_grid_streaming(&grid, a.jobs, |rec| {
        writer.write(&rec)?;
        if keep {
            kept.push(rec);
        }
        Ok(())
    })?;
    writer.finish()?;
    if let Some(path) = &a.summarize {
        let mut w = sink(Some(path))?;
        write_summary_csv(&summarize(&kept), &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn report(a: ReportArgs) -> Result<()> {
    let records = read_records_csv(open(&a.input)?)?;
    let summaries = summarize(&records);
    let table = render_table(&summaries);
    match &a.out {
        Some(path) => {
            let mut w = sink(Some(path))?;
            write_summary_csv(&summaries, &mut w)?;
            w.flush()?;
            print!("{table}");
        }
        None => {
            write_summary_csv(&summaries, io::stdout().lock())?;
            eprint!("{table}");
        }
    }
    Ok(())
}

fn render_table(summaries: &[CellSummary]) -> String {
    let mut s = format!(
        "{:<17} {:>4} {:>7} {:<24} {:>10} {:>8} {:>8} {:>10} {:>5}\n",
        "scheme", "p", "balance", "model", "mean_auroc", "std", "t", "p(2-side)", "reps"
    );
    for c in summaries {
        let (t, p) = match &c.test {
            SummaryTest::Tested { t, p_two_sided, .. } => {
                (format!("{t:.3}"), format!("{p_two_sided:.3e}"))
            }
            SummaryTest::Degenerate(_) => ("-".into(), "degenerate".into()),
        };
        s.push_str(&format!(
            "{:<17} {:>4} {:>7} {:<24} {:>10.4} {:>8.4} {:>8} {:>10} {:>5}\n",
            c.key.scheme.name(),
            c.key.p,
            c.key.balance,
            c.key.model,
            c.mean_auroc,
            c.std_auroc,
            t,
            p,
            c.n_reps
        ));
    }
    s
}

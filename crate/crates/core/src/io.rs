//! Tabular file formats.
//!
//! * Dataset CSV: header `sample_id,label,f0,f1,...` (zero or more feature
//!   columns), labels parsed as integers.
//! * Predictions CSV: columns `sample_id,label,score`, located by header name.

use std::io::{Read, Write};

use crate::dataset::{LabeledDataset, Matrix};
use crate::error::{Error, Result};
use crate::metrics::PredictionSet;

pub fn read_dataset_csv<R: Read>(input: R) -> Result<LabeledDataset> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.get(0) != Some("sample_id") || header.get(1) != Some("label") {
        return Err(Error::Parse(
            "dataset header must start with 'sample_id,label'".into(),
        ));
    }
    let d = header.len() - 2;
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    let mut data = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        if row.len() != d + 2 {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                line + 1,
                row.len(),
                d + 2
            )));
        }
        ids.push(row[0].to_string());
        labels.push(row[1].trim().parse::<i64>().map_err(|_| {
            Error::Parse(format!(
                "row {}: label '{}' is not an integer",
                line + 1,
                &row[1]
            ))
        })?);
        for v in row.iter().skip(2) {
            data.push(v.trim().parse::<f64>().map_err(|_| {
                Error::Parse(format!("row {}: feature '{v}' is not a number", line + 1))
            })?);
        }
    }
    let n = labels.len();
    LabeledDataset::new(Matrix::new(n, d, data)?, labels, Some(ids))
}

pub fn write_dataset_csv<W: Write>(dataset: &LabeledDataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["sample_id".to_string(), "label".to_string()];
    header.extend((0..dataset.n_features()).map(|j| format!("f{j}")));
    w.write_record(&header)?;
    for i in 0..dataset.len() {
        let id = dataset
            .sample_ids()
            .map_or_else(|| i.to_string(), |ids| ids[i].clone());
        let mut row = vec![id, dataset.labels()[i].to_string()];
        row.extend(dataset.features().row(i).iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Scored samples as read from a predictions file, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSamples {
    pub sample_ids: Vec<String>,
    pub labels: Vec<u8>,
    pub scores: Vec<f64>,
}

impl ScoredSamples {
    pub fn to_prediction_set(&self) -> Result<PredictionSet> {
        PredictionSet::from_scores(&self.scores, &self.labels)
    }
}

pub fn read_predictions_csv<R: Read>(input: R) -> Result<ScoredSamples> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Parse(format!("predictions file lacks a '{name}' column")))
    };
    let (ci, cl, cs) = (col("sample_id")?, col("label")?, col("score")?);
    let mut out = ScoredSamples {
        sample_ids: Vec::new(),
        labels: Vec::new(),
        scores: Vec::new(),
    };
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let get = |c: usize| row.get(c).unwrap_or("").trim();
        let label: i64 = get(cl).parse().map_err(|_| {
            Error::Parse(format!(
                "row {}: label '{}' is not an integer",
                line + 1,
                get(cl)
            ))
        })?;
        if label != 0 && label != 1 {
            return Err(Error::NonBinaryLabel {
                row: line,
                value: label,
            });
        }
        let score: f64 = get(cs).parse().map_err(|_| {
            Error::Parse(format!(
                "row {}: score '{}' is not a number",
                line + 1,
                get(cs)
            ))
        })?;
        out.sample_ids.push(get(ci).to_string());
        out.labels.push(label as u8);
        out.scores.push(score);
    }
    Ok(out)
}

pub fn write_predictions_csv<W: Write>(
    ids: &[String],
    predictions: &PredictionSet,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sample_id", "label", "score"])?;
    for e in predictions.entries() {
        let id = ids
            .get(e.index)
            .cloned()
            .unwrap_or_else(|| e.index.to_string());
        w.write_record([id, e.label.to_string(), e.score.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_round_trip() {
        let text = "sample_id,label,f0,f1\na,1,0.5,0.25\nb,0,1,2\n";
        let ds = read_dataset_csv(text.as_bytes()).unwrap();
        assert_eq!(ds.labels(), &[1, 0]);
        assert_eq!(ds.features().row(1), &[1.0, 2.0]);
        let mut buf = Vec::new();
        write_dataset_csv(&ds, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), text);
    }

    #[test]
    fn labels_only_file() {
        let ds = read_dataset_csv("sample_id,label\nx,0\ny,1\n".as_bytes()).unwrap();
        assert_eq!(ds.n_features(), 0);
        assert_eq!(ds.len(), 2);
    }

    #[test]
    fn dataset_errors() {
        assert_eq!(
            read_dataset_csv("id,label\n".as_bytes())
                .unwrap_err()
                .name(),
            "ParseError"
        );
        assert_eq!(
            read_dataset_csv("sample_id,label\na,2\n".as_bytes())
                .unwrap_err()
                .name(),
            "NonBinaryLabel"
        );
        assert_eq!(
            read_dataset_csv("sample_id,label,f0\na,1,x\n".as_bytes())
                .unwrap_err()
                .name(),
            "ParseError"
        );
    }

    #[test]
    fn predictions_by_column_name() {
        let p =
            read_predictions_csv("score,sample_id,label\n0.9,a,1\n0.1,b,0\n".as_bytes()).unwrap();
        assert_eq!(p.sample_ids, vec!["a", "b"]);
        assert_eq!(p.scores, vec![0.9, 0.1]);
        assert_eq!(p.labels, vec![1, 0]);
    }
}

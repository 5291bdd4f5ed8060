//! Labeled binary-classification datasets.

use crate::error::{Error, Result};

/// Dense row-major matrix of features.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix {rows}x{cols} needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} columns, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    /// Copies the given rows, in order, into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Positive (T) and negative (F) label counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub positives: usize,
    pub negatives: usize,
}

impl ClassCounts {
    pub fn from_labels(labels: &[u8]) -> Self {
        let positives = labels.iter().filter(|&&y| y == 1).count();
        ClassCounts {
            positives,
            negatives: labels.len() - positives,
        }
    }

    pub fn total(&self) -> usize {
        self.positives + self.negatives
    }

    pub fn is_single_class(&self) -> bool {
        self.positives == 0 || self.negatives == 0
    }
}

/// Outcome of [`validate_dataset`]. `single_class` is a warning, not an error:
/// rank metrics are undefined downstream but the data itself is well formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validation {
    pub counts: ClassCounts,
    pub single_class: bool,
}

/// Feature matrix plus binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Matrix,
    labels: Vec<u8>,
    sample_ids: Option<Vec<String>>,
}

impl LabeledDataset {
    /// Builds a dataset from integer labels, rejecting anything outside {0, 1}.
    pub fn new(
        features: Matrix,
        labels: Vec<i64>,
        sample_ids: Option<Vec<String>>,
    ) -> Result<Self> {
        check_shape(&features, labels.len(), sample_ids.as_deref())?;
        let labels = binary_labels(&labels)?;
        Ok(LabeledDataset {
            features,
            labels,
            sample_ids,
        })
    }

    pub fn from_binary(features: Matrix, labels: Vec<u8>) -> Result<Self> {
        check_shape(&features, labels.len(), None)?;
        if let Some((row, &v)) = labels.iter().enumerate().find(|(_, &y)| y > 1) {
            return Err(Error::NonBinaryLabel {
                row,
                value: v as i64,
            });
        }
        Ok(LabeledDataset {
            features,
            labels,
            sample_ids: None,
        })
    }

    /// A dataset with zero feature columns, for label-only workflows.
    pub fn labels_only(labels: Vec<i64>, sample_ids: Option<Vec<String>>) -> Result<Self> {
        let n = labels.len();
        Self::new(Matrix::zeros(n, 0), labels, sample_ids)
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn sample_ids(&self) -> Option<&[String]> {
        self.sample_ids.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn counts(&self) -> ClassCounts {
        ClassCounts::from_labels(&self.labels)
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            sample_ids: self
                .sample_ids
                .as_ref()
                .map(|ids| indices.iter().map(|&i| ids[i].clone()).collect()),
        }
    }
}

fn check_shape(features: &Matrix, n_labels: usize, ids: Option<&[String]>) -> Result<()> {
    if features.rows() != n_labels {
        return Err(Error::ShapeMismatch {
            rows: features.rows(),
            labels: n_labels,
        });
    }
    if let Some(ids) = ids {
        if ids.len() != n_labels {
            return Err(Error::ShapeMismatch {
                rows: ids.len(),
                labels: n_labels,
            });
        }
    }
    Ok(())
}

fn binary_labels(labels: &[i64]) -> Result<Vec<u8>> {
    labels
        .iter()
        .enumerate()
        .map(|(row, &v)| match v {
            0 => Ok(0),
            1 => Ok(1),
            value => Err(Error::NonBinaryLabel { row, value }),
        })
        .collect()
}

/// Checks the dataset invariants on raw parts and reports class counts.
pub fn validate_dataset(features: &Matrix, labels: &[i64]) -> Result<Validation> {
    check_shape(features, labels.len(), None)?;
    let labels = binary_labels(labels)?;
    let counts = ClassCounts::from_labels(&labels);
    Ok(Validation {
        counts,
        single_class: counts.is_single_class(),
    })
}

impl LabeledDataset {
    pub fn validate(&self) -> Validation {
        let counts = self.counts();
        Validation {
            counts,
            single_class: counts.is_single_class(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_dataset_reports_counts() {
        let x = Matrix::zeros(3, 2);
        let v = validate_dataset(&x, &[0, 1, 1]).unwrap();
        assert_eq!(v.counts.positives, 2);
        assert_eq!(v.counts.negatives, 1);
        assert!(!v.single_class);
    }

    #[test]
    fn non_binary_label_rejected() {
        let x = Matrix::zeros(2, 1);
        let err = validate_dataset(&x, &[0, 2]).unwrap_err();
        assert_eq!(err, Error::NonBinaryLabel { row: 1, value: 2 });
    }

    #[test]
    fn single_class_is_a_warning() {
        let x = Matrix::zeros(3, 1);
        let v = validate_dataset(&x, &[1, 1, 1]).unwrap();
        assert!(v.single_class);
        assert_eq!(v.counts.positives, 3);
    }

    #[test]
    fn shape_mismatch() {
        let x = Matrix::zeros(3, 1);
        assert_eq!(
            validate_dataset(&x, &[1, 0]).unwrap_err().name(),
            "ShapeMismatch"
        );
    }

    #[test]
    fn subset_keeps_rows_and_ids() {
        let x = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let ids = Some(vec!["a".into(), "b".into(), "c".into()]);
        let ds = LabeledDataset::new(x, vec![0, 1, 0], ids).unwrap();
        let s = ds.subset(&[2, 1]);
        assert_eq!(s.features().row(0), &[3.0]);
        assert_eq!(s.labels(), &[0, 1]);
        assert_eq!(s.sample_ids().unwrap(), &["c".to_string(), "b".to_string()]);
    }
}

use std::sync::Arc;

use super::{check_dim, FittedModel, Learner};
use crate::dataset::{LabeledDataset, Matrix};
use crate::error::{Error, Result};

/// k-nearest-neighbor scorer: the fraction of positive labels among the `k`
/// training rows closest in Euclidean distance. Distance ties go to the
/// smaller training index; `k` is capped at the training size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NearestNeighbors {
    pub k: usize,
}

impl NearestNeighbors {
    pub fn new(k: usize) -> Self {
        NearestNeighbors { k }
    }
}

impl Learner for NearestNeighbors {
    fn fit(&self, train: &LabeledDataset) -> Result<Box<dyn FittedModel>> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet { fold: 0 });
        }
        Ok(Box::new(KnnModel {
            k: self.k.min(train.len()),
            train: Arc::new(train.clone()),
        }))
    }
}

#[derive(Debug, Clone)]
pub struct KnnModel {
    k: usize,
    train: Arc<LabeledDataset>,
}

impl KnnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    fn score_row(&self, x: &[f64], scratch: &mut Vec<(f64, usize)>) -> f64 {
        let train = self.train.features();
        let labels = self.train.labels();
        let positives = if self.k == 1 {
            let mut best = (f64::INFINITY, usize::MAX);
            for (j, row) in train.iter_rows().enumerate() {
                let d = sq_dist(x, row);
                // strict comparison keeps the smaller index on ties
                if d < best.0 {
                    best = (d, j);
                }
            }
            labels[best.1] as usize
        } else {
            scratch.clear();
            scratch.extend(
                train
                    .iter_rows()
                    .enumerate()
                    .map(|(j, row)| (sq_dist(x, row), j)),
            );
            let by_dist_then_index =
                |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if self.k < scratch.len() {
                scratch.select_nth_unstable_by(self.k - 1, by_dist_then_index);
            }
            scratch[..self.k]
                .iter()
                .filter(|&&(_, j)| labels[j] == 1)
                .count()
        };
        positives as f64 / self.k as f64
    }
}

impl FittedModel for KnnModel {
    fn predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        check_dim(self.train.n_features(), features)?;
        let mut scratch = Vec::with_capacity(self.train.len());
        Ok(features
            .iter_rows()
            .map(|x| self.score_row(x, &mut scratch))
            .collect())
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn ds(rows: Vec<Vec<f64>>, y: Vec<u8>) -> LabeledDataset {
        LabeledDataset::from_binary(Matrix::from_rows(&rows).unwrap(), y).unwrap()
    }

    // Oracle: full sort of all (distance, index) pairs.
    fn brute_force(train: &LabeledDataset, k: usize, x: &[f64]) -> f64 {
        let mut all: Vec<(f64, usize)> = (0..train.len())
            .map(|j| {
                let r = train.features().row(j);
                let d: f64 = r
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                (d, j)
            })
            .collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let k = k.min(all.len());
        all[..k]
            .iter()
            .filter(|&&(_, j)| train.labels()[j] == 1)
            .count() as f64
            / k as f64
    }

    #[test]
    fn one_nearest_neighbor() {
        let train = ds(vec![vec![0.0], vec![1.0]], vec![1, 0]);
        let m = NearestNeighbors::new(1).fit(&train).unwrap();
        assert_eq!(
            m.predict(&Matrix::from_rows(&[vec![0.2]]).unwrap())
                .unwrap(),
            vec![1.0]
        );
    }

    #[test]
    fn five_of_six_points() {
        let pts = [0.0, 0.1, 0.35, 0.5, 0.9, 1.4];
        let train = ds(
            pts.iter().map(|&v| vec![v, 0.5 * v]).collect(),
            vec![1, 0, 1, 1, 0, 0],
        );
        let m = NearestNeighbors::new(5).fit(&train).unwrap();
        for q in [0.0, 0.3, 0.7, 1.2, 2.0] {
            let x = [q, 0.1];
            let got = m
                .predict(&Matrix::from_rows(&[x.to_vec()]).unwrap())
                .unwrap()[0];
            assert_eq!(got, brute_force(&train, 5, &x));
        }
    }

    #[test]
    fn ties_go_to_smaller_index() {
        // both training points are at distance 1 from the query
        let train = ds(vec![vec![-1.0], vec![1.0]], vec![0, 1]);
        let m = NearestNeighbors::new(1).fit(&train).unwrap();
        assert_eq!(
            m.predict(&Matrix::from_rows(&[vec![0.0]]).unwrap())
                .unwrap(),
            vec![0.0]
        );
        let train = ds(
            vec![vec![-1.0], vec![1.0], vec![1.0], vec![3.0]],
            vec![1, 0, 1, 1],
        );
        let m = NearestNeighbors::new(2).fit(&train).unwrap();
        // candidates at distance 1: indices 0, 1, 2 -> keep 0 and 1
        assert_eq!(
            m.predict(&Matrix::from_rows(&[vec![0.0]]).unwrap())
                .unwrap(),
            vec![0.5]
        );
    }

    #[test]
    fn k_capped_at_training_size() {
        let train = ds(vec![vec![0.0], vec![1.0], vec![2.0]], vec![1, 0, 1]);
        let m = NearestNeighbors::new(10).fit(&train).unwrap();
        let s = m
            .predict(&Matrix::from_rows(&[vec![5.0]]).unwrap())
            .unwrap();
        assert!((s[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = RngStream::from_seed(11);
        for trial in 0..40 {
            let m = 5 + rng.index(195);
            let d = 1 + rng.index(4);
            // coarse grid values force distance ties
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..d).map(|_| rng.index(4) as f64).collect())
                .collect();
            let y: Vec<u8> = (0..m).map(|_| rng.index(2) as u8).collect();
            let train = ds(rows, y);
            let k = 1 + trial % 7;
            let model = NearestNeighbors::new(k).fit(&train).unwrap();
            for _ in 0..5 {
                let x: Vec<f64> = (0..d)
                    .map(|_| rng.index(4) as f64 + 0.5 * rng.index(2) as f64)
                    .collect();
                let got = model
                    .predict(&Matrix::from_rows(std::slice::from_ref(&x)).unwrap())
                    .unwrap()[0];
                assert_eq!(got, brute_force(&train, k, &x));
            }
        }
    }
}

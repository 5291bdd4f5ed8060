use std::io::Write;

use serde::Serialize;

use super::{require_both_classes, PredictionSet};
use crate::error::{Error, Result};

/// Sample order by descending score, and the `[start, end)` ranges of equal scores.
fn descending_groups(scores: &[f64]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || scores[order[i]] != scores[order[start]] {
            groups.push((start, i));
            start = i;
        }
    }
    (order, groups)
}

fn check_lengths(scores: &[f64], labels: &[u8]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::ShapeMismatch {
            rows: scores.len(),
            labels: labels.len(),
        });
    }
    Ok(())
}

/// Mann-Whitney auROC: `(#{pos > neg} + 0.5 * #{pos = neg}) / (T * F)`.
/// Pair counts are accumulated in integers, so the result is the exact
/// rational rounded once.
pub fn auroc_scores(scores: &[f64], labels: &[u8]) -> Result<f64> {
    check_lengths(scores, labels)?;
    let c = require_both_classes(labels)?;
    let (order, groups) = descending_groups(scores);
    // walk from the highest score down; count negatives already passed
    let mut neg_above: u128 = 0;
    let mut twice_credit: u128 = 0;
    for &(s, e) in &groups {
        let pos = order[s..e].iter().filter(|&&i| labels[i] == 1).count() as u128;
        let neg = (e - s) as u128 - pos;
        let neg_below = c.negatives as u128 - neg_above - neg;
        twice_credit += 2 * pos * neg_below + pos * neg;
        neg_above += neg;
    }
    Ok(twice_credit as f64 / (2.0 * c.positives as f64 * c.negatives as f64))
}

pub fn auroc(predictions: &PredictionSet) -> Result<f64> {
    auroc_scores(&predictions.scores(), &predictions.labels())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`.
    pub points: Vec<(f64, f64)>,
    /// `thresholds[i]` produces `points[i + 1]`.
    pub thresholds: Vec<f64>,
}

impl RocCurve {
    pub fn area(&self) -> f64 {
        trapezoid(&self.points)
    }

    /// CSV with header `threshold,fpr,tpr`; the `(0, 0)` origin row has threshold `inf`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["threshold", "fpr", "tpr"])?;
        for (i, &(x, y)) in self.points.iter().enumerate() {
            let t = if i == 0 {
                "inf".to_string()
            } else {
                self.thresholds[i - 1].to_string()
            };
            w.write_record([t, x.to_string(), y.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn roc_curve(predictions: &PredictionSet) -> Result<RocCurve> {
    roc_curve_scores(&predictions.scores(), &predictions.labels())
}

pub(crate) fn roc_curve_scores(scores: &[f64], labels: &[u8]) -> Result<RocCurve> {
    check_lengths(scores, labels)?;
    let c = require_both_classes(labels)?;
    let (order, groups) = descending_groups(scores);
    let (t, f) = (c.positives as f64, c.negatives as f64);
    let mut points = vec![(0.0, 0.0)];
    let mut thresholds = Vec::with_capacity(groups.len());
    let (mut tp, mut fp) = (0usize, 0usize);
    for &(s, e) in &groups {
        let pos = order[s..e].iter().filter(|&&i| labels[i] == 1).count();
        tp += pos;
        fp += e - s - pos;
        points.push((fp as f64 / f, tp as f64 / t));
        thresholds.push(scores[order[s]]);
    }
    Ok(RocCurve { points, thresholds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrCurve {
    /// `(recall, precision)`, one per distinct threshold, recall nondecreasing.
    pub points: Vec<(f64, f64)>,
    pub thresholds: Vec<f64>,
}

impl PrCurve {
    /// Trapezoidal area with constant extension of the first precision down to recall 0.
    pub fn area(&self) -> f64 {
        let mut pts = Vec::with_capacity(self.points.len() + 1);
        if let Some(&(r, p)) = self.points.first() {
            if r > 0.0 {
                pts.push((0.0, p));
            }
        }
        pts.extend_from_slice(&self.points);
        trapezoid(&pts)
    }

    /// CSV with header `threshold,recall,precision`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["threshold", "recall", "precision"])?;
        for (&(r, p), t) in self.points.iter().zip(&self.thresholds) {
            w.write_record([t.to_string(), r.to_string(), p.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn pr_curve(predictions: &PredictionSet) -> Result<PrCurve> {
    pr_curve_scores(&predictions.scores(), &predictions.labels())
}

pub(crate) fn pr_curve_scores(scores: &[f64], labels: &[u8]) -> Result<PrCurve> {
    check_lengths(scores, labels)?;
    let c = require_both_classes(labels)?;
    let (order, groups) = descending_groups(scores);
    let t = c.positives as f64;
    let mut points = Vec::with_capacity(groups.len());
    let mut thresholds = Vec::with_capacity(groups.len());
    let (mut tp, mut taken) = (0usize, 0usize);
    for &(s, e) in &groups {
        tp += order[s..e].iter().filter(|&&i| labels[i] == 1).count();
        taken += e - s;
        points.push((tp as f64 / t, tp as f64 / taken as f64));
        thresholds.push(scores[order[s]]);
    }
    Ok(PrCurve { points, thresholds })
}

pub fn aupr_scores(scores: &[f64], labels: &[u8]) -> Result<f64> {
    Ok(pr_curve_scores(scores, labels)?.area())
}

pub fn aupr(predictions: &PredictionSet) -> Result<f64> {
    Ok(pr_curve(predictions)?.area())
}

fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) * 0.5)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    // Oracle: every positive-negative pair.
    fn pairwise(scores: &[f64], labels: &[u8]) -> f64 {
        let (mut credit, mut pairs) = (0.0, 0.0);
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                if labels[i] == 1 && labels[j] == 0 {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        credit += 1.0;
                    } else if scores[i] == scores[j] {
                        credit += 0.5;
                    }
                }
            }
        }
        credit / pairs
    }

    // Oracle: threshold sweep over every candidate threshold, including
    // values between scores, evaluated independently per threshold.
    fn sweep(scores: &[f64], labels: &[u8]) -> Vec<(f64, f64)> {
        let mut ts: Vec<f64> = scores.to_vec();
        ts.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ts.dedup();
        let t = labels.iter().filter(|&&y| y == 1).count() as f64;
        let f = labels.len() as f64 - t;
        let mut pts = vec![(0.0, 0.0)];
        for th in ts {
            let tp = (0..scores.len())
                .filter(|&i| scores[i] >= th && labels[i] == 1)
                .count() as f64;
            let fp = (0..scores.len())
                .filter(|&i| scores[i] >= th && labels[i] == 0)
                .count() as f64;
            pts.push((fp / f, tp / t));
        }
        pts
    }

    #[test]
    fn perfect_and_constant() {
        assert_eq!(auroc_scores(&[1.0, 0.0, 1.0], &[1, 0, 1]).unwrap(), 1.0);
        assert_eq!(auroc_scores(&[0.3; 5], &[1, 0, 1, 0, 0]).unwrap(), 0.5);
        assert_eq!(
            auroc_scores(&[0.3; 2], &[1, 1]).unwrap_err().name(),
            "SingleClass"
        );
    }

    #[test]
    fn two_point_curves() {
        let c = roc_curve_scores(&[0.9, 0.1], &[1, 0]).unwrap();
        assert_eq!(c.points, vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(c.thresholds, vec![0.9, 0.1]);
        let c = roc_curve_scores(&[0.1, 0.9], &[1, 0]).unwrap();
        assert_eq!(c.points, vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert_eq!(aupr_scores(&[0.9, 0.1], &[1, 0]).unwrap(), 1.0);
    }

    #[test]
    fn four_sample_mixed_case_matches_sweep() {
        let s = [0.8, 0.4, 0.4, 0.1];
        let y = [1, 0, 1, 0];
        let c = roc_curve_scores(&s, &y).unwrap();
        assert_eq!(c.points, sweep(&s, &y));
        assert_eq!(
            c.points,
            vec![(0.0, 0.0), (0.0, 0.5), (0.5, 1.0), (1.0, 1.0)]
        );
        assert!((c.area() - 0.875).abs() < 1e-15);
        assert_eq!(auroc_scores(&s, &y).unwrap(), 0.875);
    }

    #[test]
    fn mean_dummy_pr_area_is_a_quarter() {
        // training mean is higher when a negative is held out
        let s = [0.4, 0.6, 0.4, 0.6];
        let y = [1, 0, 1, 0];
        let c = pr_curve_scores(&s, &y).unwrap();
        assert_eq!(c.points, vec![(0.0, 0.0), (1.0, 0.5)]);
        assert_eq!(c.area(), 0.25);
        assert_eq!(auroc_scores(&s, &y).unwrap(), 0.0);
        // negated: perfect
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        assert_eq!(aupr_scores(&neg, &y).unwrap(), 1.0);
    }

    #[test]
    fn random_instances_match_oracles() {
        let mut rng = RngStream::from_seed(99);
        for _ in 0..1000 {
            let n = 2 + rng.index(49);
            let levels = 1 + rng.index(8);
            let scores: Vec<f64> = (0..n).map(|_| rng.index(levels) as f64 / 4.0).collect();
            let mut labels: Vec<u8> = (0..n).map(|_| rng.index(2) as u8).collect();
            labels[0] = 1;
            labels[1] = 0;
            let a = auroc_scores(&scores, &labels).unwrap();
            assert!((a - pairwise(&scores, &labels)).abs() <= 1e-12);
            let c = roc_curve_scores(&scores, &labels).unwrap();
            assert_eq!(c.points, sweep(&scores, &labels));
            assert!((c.area() - a).abs() <= 1e-12);
        }
    }

    #[test]
    fn curves_serialize() {
        let c = roc_curve_scores(&[0.9, 0.1], &[1, 0]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "threshold,fpr,tpr\ninf,0,0\n0.9,0,1\n0.1,1,1\n"
        );
        let p = pr_curve_scores(&[0.9, 0.1], &[1, 0]).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "threshold,recall,precision\n0.9,1,1\n0.1,1,0.5\n"
        );
    }
}

//! L2-regularized logistic regression.
//!
//! Minimizes
//!
//! ```text
//! (1/m) * sum_i [ softplus(z_i) - y_i * z_i ] + (lambda/2) * |w|^2,   z_i = w.x_i + b
//! ```
//!
//! with the intercept `b` unpenalized, by damped Newton iterations until the
//! gradient norm drops to the solver tolerance.

use super::{check_dim, FittedModel, Learner};
use crate::dataset::{LabeledDataset, Matrix};
use crate::error::{Error, Result};

/// Intercept magnitude used when the training fold contains a single class.
pub const SINGLE_CLASS_INTERCEPT: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-8,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LogisticModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.intercept
    }
}

impl FittedModel for LogisticModel {
    fn predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        check_dim(self.weights.len(), features)?;
        Ok(features
            .iter_rows()
            .map(|x| sigmoid(self.decision(x)))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticRegression {
    pub lambda: f64,
    pub options: SolverOptions,
}

impl LogisticRegression {
    pub fn new(lambda: f64) -> Self {
        LogisticRegression {
            lambda,
            options: SolverOptions::default(),
        }
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }

    pub fn fit_model(&self, train: &LabeledDataset) -> Result<LogisticModel> {
        if train.is_empty() {
            return Err(Error::EmptyTrainingSet { fold: 0 });
        }
        let d = train.n_features();
        let counts = train.counts();
        if counts.is_single_class() {
            // The unpenalized intercept diverges; clamp it.
            let sign = if counts.positives > 0 { 1.0 } else { -1.0 };
            return Ok(LogisticModel {
                weights: vec![0.0; d],
                intercept: sign * SINGLE_CLASS_INTERCEPT,
            });
        }
        let problem = Problem {
            x: train.features(),
            y: train.labels(),
            lambda: self.lambda,
        };
        problem.solve(&self.options)
    }
}

impl Learner for LogisticRegression {
    fn fit(&self, train: &LabeledDataset) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(self.fit_model(train)?))
    }
}

struct Problem<'a> {
    x: &'a Matrix,
    y: &'a [u8],
    lambda: f64,
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        self.x.cols() + 1
    }

    // theta = [w..., b]
    fn objective(&self, theta: &[f64]) -> f64 {
        let d = self.x.cols();
        let (w, b) = (&theta[..d], theta[d]);
        let m = self.y.len() as f64;
        let loss: f64 = self
            .x
            .iter_rows()
            .zip(self.y)
            .map(|(xi, &yi)| {
                let z = dot(w, xi) + b;
                softplus(z) - yi as f64 * z
            })
            .sum();
        loss / m + 0.5 * self.lambda * dot(w, w)
    }

    /// Gradient and Hessian (row-major, dim x dim) at `theta`.
    fn derivatives(&self, theta: &[f64], grad: &mut [f64], hess: &mut [f64]) {
        let d = self.x.cols();
        let k = d + 1;
        let (w, b) = (&theta[..d], theta[d]);
        let inv_m = 1.0 / self.y.len() as f64;
        grad.fill(0.0);
        hess.fill(0.0);
        for (xi, &yi) in self.x.iter_rows().zip(self.y) {
            let p = sigmoid(dot(w, xi) + b);
            let r = p - yi as f64;
            let s = p * (1.0 - p);
            for a in 0..d {
                grad[a] += r * xi[a];
                let sa = s * xi[a];
                let row = &mut hess[a * k..a * k + k];
                for c in a..d {
                    row[c] += sa * xi[c];
                }
                row[d] += sa;
            }
            grad[d] += r;
            hess[d * k + d] += s;
        }
        for a in 0..k {
            grad[a] *= inv_m;
            for c in a..k {
                hess[a * k + c] *= inv_m;
                hess[c * k + a] = hess[a * k + c];
            }
        }
        for a in 0..d {
            grad[a] += self.lambda * w[a];
            hess[a * k + a] += self.lambda;
        }
    }

    fn solve(&self, opts: &SolverOptions) -> Result<LogisticModel> {
        let k = self.dim();
        let d = k - 1;
        let mean = self.y.iter().map(|&v| v as f64).sum::<f64>() / self.y.len() as f64;
        let mut theta = vec![0.0; k];
        theta[d] = (mean / (1.0 - mean)).ln();
        let mut grad = vec![0.0; k];
        let mut hess = vec![0.0; k * k];
        let mut step = vec![0.0; k];
        let mut trial = vec![0.0; k];
        let mut f = self.objective(&theta);

        for _ in 0..opts.max_iterations {
            self.derivatives(&theta, &mut grad, &mut hess);
            let gnorm = norm(&grad);
            if gnorm <= opts.tolerance {
                return Ok(split_theta(theta));
            }
            // Newton direction; fall back to steepest descent if the Hessian
            // is numerically singular.
            step.copy_from_slice(&grad);
            if !cholesky_solve(&mut hess, &mut step, k) {
                step.copy_from_slice(&grad);
            }
            let slope = -dot(&grad, &step);
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                for i in 0..k {
                    trial[i] = theta[i] - t * step[i];
                }
                let ft = self.objective(&trial);
                if ft <= f + 1e-4 * t * slope + 1e-15 * f.abs().max(1.0) {
                    theta.copy_from_slice(&trial);
                    f = ft;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // Objective is flat to machine precision along the step.
                self.derivatives(&theta, &mut grad, &mut hess);
                let gnorm = norm(&grad);
                if gnorm <= opts.tolerance {
                    return Ok(split_theta(theta));
                }
                return Err(Error::NonConvergence {
                    iterations: opts.max_iterations,
                    grad_norm: gnorm,
                });
            }
        }
        self.derivatives(&theta, &mut grad, &mut hess);
        let gnorm = norm(&grad);
        if gnorm <= opts.tolerance {
            Ok(split_theta(theta))
        } else {
            Err(Error::NonConvergence {
                iterations: opts.max_iterations,
                grad_norm: gnorm,
            })
        }
    }
}

fn split_theta(mut theta: Vec<f64>) -> LogisticModel {
    let intercept = theta.pop().expect("theta has an intercept");
    LogisticModel {
        weights: theta,
        intercept,
    }
}

/// In-place Cholesky solve of `a x = b` for symmetric positive definite `a`.
/// Returns false if `a` is not numerically positive definite.
fn cholesky_solve(a: &mut [f64], b: &mut [f64], k: usize) -> bool {
    for j in 0..k {
        let mut s = a[j * k + j];
        for p in 0..j {
            s -= a[j * k + p] * a[j * k + p];
        }
        if !s.is_finite() || s <= 0.0 {
            return false;
        }
        let l = s.sqrt();
        a[j * k + j] = l;
        for i in j + 1..k {
            let mut s = a[i * k + j];
            for p in 0..j {
                s -= a[i * k + p] * a[j * k + p];
            }
            a[i * k + j] = s / l;
        }
    }
    for i in 0..k {
        let mut s = b[i];
        for p in 0..i {
            s -= a[i * k + p] * b[p];
        }
        b[i] = s / a[i * k + i];
    }
    for i in (0..k).rev() {
        let mut s = b[i];
        for p in i + 1..k {
            s -= a[p * k + i] * b[p];
        }
        b[i] = s / a[i * k + i];
    }
    true
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

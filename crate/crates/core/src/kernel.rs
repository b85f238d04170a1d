//! Gaussian kernel, the per-cell least-squares SVM solve and clipped
//! prediction.
//!
//! A cell with inputs `x_1..x_m` and labels `y` is trained by solving
//! `(K + shift * I) alpha = y` with `K_ik = exp(-|x_i - x_k|^2 / gamma^2)`.
//! With the cell-local regularizer `lambda_tilde` and the loss averaged over
//! the cell, `shift = m * lambda_tilde`; with a regularizer `lambda` tied to
//! a loss averaged over `n` global samples, `shift = n * lambda`. The two
//! agree when `lambda_tilde = n * lambda / m`.

use faer::linalg::solvers::Solve;
use faer::{Col, Mat, Side};
use serde::{Deserialize, Serialize};

use crate::partition::sq_dist;
use crate::{Error, Result};

const JITTER_RETRIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel {
    gamma: f64,
}

impl GaussianKernel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::config(format!("kernel width must be positive, got {gamma}")));
        }
        Ok(GaussianKernel { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        from_sq_dist(sq_dist(x, y), self.gamma)
    }
}

#[inline]
pub(crate) fn from_sq_dist(d2: f64, gamma: f64) -> f64 {
    (-d2 / (gamma * gamma)).exp()
}

/// `exp(-|x - y|^2 / gamma^2)`.
pub fn kernel_eval(x: &[f64], y: &[f64], gamma: f64) -> f64 {
    from_sq_dist(sq_dist(x, y), gamma)
}

pub fn clip(t: f64, m: f64) -> f64 {
    t.clamp(-m, m)
}

/// Dense symmetric Gram matrix of one working set.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    mat: Mat<f64>,
}

impl KernelMatrix {
    pub fn new<P: AsRef<[f64]>>(points: &[P], gamma: f64) -> Self {
        let n = points.len();
        let mut mat = Mat::<f64>::zeros(n, n);
        for j in 0..n {
            mat[(j, j)] = 1.0;
            let pj = points[j].as_ref();
            for i in j + 1..n {
                let v = from_sq_dist(sq_dist(points[i].as_ref(), pj), gamma);
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
        KernelMatrix { mat }
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<f64> {
        &self.mat
    }

    /// `K v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let col = Col::<f64>::from_fn(v.len(), |i| v[i]);
        let out = &self.mat * &col;
        (0..out.nrows()).map(|i| out[i]).collect()
    }

    /// Solves `(K + shift * I) alpha = y` by Cholesky factorization. If the
    /// factorization breaks down, a small jitter proportional to the mean
    /// diagonal is added and the factorization retried.
    pub fn solve_shifted(&self, shift: f64, y: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        let trace: f64 = (0..n).map(|i| self.mat[(i, i)]).sum();
        let jitter = 1e-12 * trace / n.max(1) as f64;
        let rhs = Col::<f64>::from_fn(n, |i| y[i]);

        let mut extra = 0.0;
        for attempt in 0..=JITTER_RETRIES {
            let mut a = self.mat.clone();
            for i in 0..n {
                a[(i, i)] += shift + extra;
            }
            if let Ok(llt) = a.llt(Side::Lower) {
                let sol = llt.solve(&rhs);
                let alpha: Vec<f64> = (0..n).map(|i| sol[i]).collect();
                if alpha.iter().all(|v| v.is_finite()) {
                    return Ok(alpha);
                }
            }
            extra = jitter * 100f64.powi(attempt as i32);
            log::debug!("cholesky failed (n = {n}, shift = {shift}), retrying with jitter {extra:e}");
        }
        Err(Error::Numerical(format!(
            "kernel system of size {n} with shift {shift:e} is not positive definite"
        )))
    }
}

/// A trained working-set model `f(x) = sum_i alpha_i k(x, x_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellModel {
    pub support_inputs: Vec<Vec<f64>>,
    pub alpha: Vec<f64>,
    pub gamma: f64,
    pub lambda_tilde: f64,
    pub clip_bound: f64,
}

impl CellModel {
    /// The model of a cell without training samples: predicts 0 everywhere.
    pub fn zero(clip_bound: f64) -> Self {
        CellModel {
            support_inputs: Vec::new(),
            alpha: Vec::new(),
            gamma: 1.0,
            lambda_tilde: 0.0,
            clip_bound,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        self.support_inputs
            .iter()
            .zip(&self.alpha)
            .map(|(s, a)| a * from_sq_dist(sq_dist(x, s), self.gamma))
            .sum()
    }

    pub fn predict_clipped(&self, x: &[f64]) -> f64 {
        clip(self.predict(x), self.clip_bound)
    }
}

fn check_cell<P: AsRef<[f64]>>(inputs: &[P], labels: &[f64], gamma: f64, clip_bound: f64) -> Result<()> {
    if inputs.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: inputs.len(),
            got: labels.len(),
        });
    }
    GaussianKernel::new(gamma)?;
    if !(clip_bound > 0.0) {
        return Err(Error::config(format!("clip bound must be positive, got {clip_bound}")));
    }
    Ok(())
}

fn fit<P: AsRef<[f64]>>(
    inputs: &[P],
    labels: &[f64],
    shift: f64,
    gamma: f64,
    lambda_tilde: f64,
    clip_bound: f64,
) -> Result<CellModel> {
    if inputs.is_empty() {
        return Ok(CellModel::zero(clip_bound));
    }
    let alpha = KernelMatrix::new(inputs, gamma).solve_shifted(shift, labels)?;
    Ok(CellModel {
        support_inputs: inputs.iter().map(|p| p.as_ref().to_vec()).collect(),
        alpha,
        gamma,
        lambda_tilde,
        clip_bound,
    })
}

/// Trains with a regularizer `lambda` whose loss term is averaged over
/// `n_global` samples (the whole training set), i.e.
/// `(K + n_global * lambda * I) alpha = y`.
pub fn train_cell<P: AsRef<[f64]>>(
    inputs: &[P],
    labels: &[f64],
    lambda: f64,
    gamma: f64,
    n_global: usize,
    clip_bound: f64,
) -> Result<CellModel> {
    check_cell(inputs, labels, gamma, clip_bound)?;
    if !(lambda > 0.0) || n_global == 0 {
        return Err(Error::config(format!(
            "need lambda > 0 and n_global > 0, got {lambda} and {n_global}"
        )));
    }
    let shift = n_global as f64 * lambda;
    let lambda_tilde = if inputs.is_empty() { 0.0 } else { shift / inputs.len() as f64 };
    fit(inputs, labels, shift, gamma, lambda_tilde, clip_bound)
}

/// Trains with the cell-local regularizer, `(K + m * lambda_tilde * I) alpha = y`.
pub fn train_cell_local<P: AsRef<[f64]>>(
    inputs: &[P],
    labels: &[f64],
    lambda_tilde: f64,
    gamma: f64,
    clip_bound: f64,
) -> Result<CellModel> {
    check_cell(inputs, labels, gamma, clip_bound)?;
    if !(lambda_tilde > 0.0) {
        return Err(Error::config(format!("lambda must be positive, got {lambda_tilde}")));
    }
    let shift = inputs.len() as f64 * lambda_tilde;
    fit(inputs, labels, shift, gamma, lambda_tilde, clip_bound)
}

//! Hyperparameter selection: geometric grids, per-cell k-fold
//! cross-validation, train/validation selection over a partition, and the
//! fixed theoretical parameter schedules.

mod cv;
mod grid;
mod theory;
mod trace;
mod tv;

pub use cv::{fold_assignment, kfold_select, CvConfig, CvOutcome};
pub use grid::{geometric_grid, geometric_values, GridConfig, HyperGrid};
pub use theory::{theory_params, TheoryParams, TheorySchedule};
pub use trace::{write_trace_csv, GridScore, TraceRow};
pub use tv::{tv_select, TvCellResult, TvConfig, TvSelection};

use crate::kernel::{clip, KernelMatrix};
use crate::partition::sq_dist;
use crate::kernel::from_sq_dist;

/// Validation predictions `C alpha` for a cross-kernel `C` stored row-major.
pub(crate) struct CrossKernel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CrossKernel {
    pub(crate) fn new(queries: &[&[f64]], support: &[&[f64]], gamma: f64) -> Self {
        let mut data = Vec::with_capacity(queries.len() * support.len());
        for q in queries {
            data.extend(support.iter().map(|s| from_sq_dist(sq_dist(q, s), gamma)));
        }
        CrossKernel {
            rows: queries.len(),
            cols: support.len(),
            data,
        }
    }

    /// Sum of squared errors of the clipped predictions against `labels`.
    pub(crate) fn clipped_sse(&self, alpha: &[f64], labels: &[f64], clip_bound: f64) -> f64 {
        debug_assert_eq!(alpha.len(), self.cols);
        debug_assert_eq!(labels.len(), self.rows);
        self.data
            .chunks_exact(self.cols.max(1))
            .take(self.rows)
            .zip(labels)
            .map(|(row, y)| {
                let t: f64 = row.iter().zip(alpha).map(|(k, a)| k * a).sum();
                let e = y - clip(t, clip_bound);
                e * e
            })
            .sum()
    }
}

/// Picks the smallest risk in `(lambda, gamma)` lexicographic order,
/// keeping the first on ties (smallest lambda, then smallest gamma).
pub(crate) fn argmin_lex(risks: &[Vec<f64>]) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_r = f64::INFINITY;
    for (li, row) in risks.iter().enumerate() {
        for (gi, &r) in row.iter().enumerate() {
            if r < best_r {
                best_r = r;
                best = (li, gi);
            }
        }
    }
    best
}

pub(crate) fn gram(points: &[&[f64]], gamma: f64) -> KernelMatrix {
    KernelMatrix::new(points, gamma)
}

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{argmin_lex, gram, CrossKernel, GridScore, HyperGrid};
use crate::parallel::par_map;
use crate::rng::{self, purpose};
use crate::{Error, Result};

/// Fold-level Gram matrices of all grid widths are evaluated in parallel only
/// while their combined size stays below this many bytes.
const PARALLEL_GRAM_BUDGET: usize = 2 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig { folds: 5, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    /// Selected cell-local regularizer (a grid value).
    pub lambda_tilde: f64,
    /// The same regularizer expressed against `n_global` samples.
    pub lambda: f64,
    pub gamma: f64,
    /// Mean held-out risk of the winner; `None` when the cell was too small
    /// to validate and the grid's median pair was used.
    pub risk: Option<f64>,
    pub folds_used: usize,
    pub scores: Vec<GridScore>,
}

/// Random fold labels for `n` points: a seeded shuffle dealt round-robin,
/// so fold sizes differ by at most one.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::rng_for(seed, &[purpose::FOLDS]));
    let mut fold = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        fold[i] = pos % folds;
    }
    fold
}

/// k-fold cross-validation of the least-squares SVM over `grid` on one
/// working set. Grid lambdas are cell-local: a model trained on `t` points
/// uses the shift `t * lambda`. Held-out risk is the clipped squared error.
///
/// Cells with fewer points than folds use leave-one-out; a single point gets
/// the grid's median pair.
pub fn kfold_select<P: AsRef<[f64]> + Sync>(
    inputs: &[P],
    labels: &[f64],
    grid: &HyperGrid,
    cfg: &CvConfig,
    n_global: usize,
    clip_bound: f64,
) -> Result<CvOutcome> {
    let n = inputs.len();
    if n == 0 {
        return Err(Error::EmptyInput("cross-validation needs a nonempty cell"));
    }
    if labels.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: labels.len() });
    }
    if cfg.folds < 2 {
        return Err(Error::config(format!("need at least 2 folds, got {}", cfg.folds)));
    }
    let to_global = |lt: f64| lt * n as f64 / n_global.max(1) as f64;

    if n == 1 {
        let (lt, g) = grid.median_pair();
        return Ok(CvOutcome {
            lambda_tilde: lt,
            lambda: to_global(lt),
            gamma: g,
            risk: None,
            folds_used: 0,
            scores: Vec::new(),
        });
    }

    let folds = cfg.folds.min(n);
    let fold_of = fold_assignment(n, folds, cfg.seed);
    let points: Vec<&[f64]> = inputs.iter().map(AsRef::as_ref).collect();
    let (nl, ng) = (grid.lambdas().len(), grid.gammas().len());

    let tasks: Vec<(usize, usize)> = (0..folds).flat_map(|f| (0..ng).map(move |g| (f, g))).collect();
    let eval = |_: usize, &(f, gi): &(usize, usize)| -> Result<Vec<f64>> {
        let (train, held): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| fold_of[i] != f);
        let tp: Vec<&[f64]> = train.iter().map(|&i| points[i]).collect();
        let ty: Vec<f64> = train.iter().map(|&i| labels[i]).collect();
        let hp: Vec<&[f64]> = held.iter().map(|&i| points[i]).collect();
        let hy: Vec<f64> = held.iter().map(|&i| labels[i]).collect();
        let gamma = grid.gammas()[gi];
        let k = gram(&tp, gamma);
        let cross = CrossKernel::new(&hp, &tp, gamma);
        grid.lambdas()
            .iter()
            .map(|&lt| {
                let alpha = k.solve_shifted(tp.len() as f64 * lt, &ty)?;
                Ok(cross.clipped_sse(&alpha, &hy, clip_bound) / hy.len() as f64)
            })
            .collect()
    };
    let fold_train = n - n / folds;
    let parallel_ok = fold_train * fold_train * 8 * rayon::current_num_threads() <= PARALLEL_GRAM_BUDGET;
    let results: Vec<Result<Vec<f64>>> = if parallel_ok {
        par_map(&tasks, eval)
    } else {
        tasks.iter().enumerate().map(|(i, t)| eval(i, t)).collect()
    };

    // fold_risks[li][gi][f]
    let mut fold_risks = vec![vec![vec![0.0; folds]; ng]; nl];
    for (&(f, gi), res) in tasks.iter().zip(results) {
        for (li, r) in res?.into_iter().enumerate() {
            fold_risks[li][gi][f] = r;
        }
    }
    let mean: Vec<Vec<f64>> = fold_risks
        .iter()
        .map(|row| row.iter().map(|fr| fr.iter().sum::<f64>() / folds as f64).collect())
        .collect();
    let (bl, bg) = argmin_lex(&mean);

    let mut scores = Vec::with_capacity(nl * ng);
    for (li, &lt) in grid.lambdas().iter().enumerate() {
        for (gi, &g) in grid.gammas().iter().enumerate() {
            scores.push(GridScore {
                lambda: lt,
                gamma: g,
                risk: mean[li][gi],
                fold_risks: fold_risks[li][gi].clone(),
            });
        }
    }
    let lt = grid.lambdas()[bl];
    Ok(CvOutcome {
        lambda_tilde: lt,
        lambda: to_global(lt),
        gamma: grid.gammas()[bg],
        risk: Some(mean[bl][bg]),
        folds_used: folds,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::geometric_grid;

    fn toy(n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let xs: Vec<Vec<f64>> = (0..n).map(|i| vec![-1.0 + 2.0 * i as f64 / n as f64]).collect();
        let ys = xs.iter().map(|x| (3.0 * x[0]).sin() * 0.8).collect();
        (xs, ys)
    }

    #[test]
    fn folds_are_balanced_and_cover() {
        for (n, k) in [(10, 3), (23, 5), (5, 5), (101, 7)] {
            let f = fold_assignment(n, k, 4);
            let mut counts = vec![0usize; k];
            for &x in &f {
                counts[x] += 1;
            }
            assert_eq!(counts.iter().sum::<usize>(), n);
            assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
        }
        assert_eq!(fold_assignment(30, 5, 1), fold_assignment(30, 5, 1));
    }

    #[test]
    fn single_pair_grid_returns_it() {
        let (xs, ys) = toy(20);
        let grid = HyperGrid::single(0.01, 0.3).unwrap();
        let out = kfold_select(&xs, &ys, &grid, &CvConfig::default(), 20, 1.0).unwrap();
        assert_eq!((out.lambda_tilde, out.gamma), (0.01, 0.3));
        assert_eq!(out.scores.len(), 1);
        assert_eq!(out.folds_used, 5);
    }

    #[test]
    fn duplicated_lambdas_pick_the_first() {
        let (xs, ys) = toy(20);
        let grid = HyperGrid::new_unchecked(vec![0.01, 0.01], vec![0.3]);
        let out = kfold_select(&xs, &ys, &grid, &CvConfig::default(), 20, 1.0).unwrap();
        assert_eq!(out.scores[0].risk, out.scores[1].risk);
        assert_eq!(out.lambda_tilde, 0.01);
    }

    #[test]
    fn cv_is_deterministic() {
        let (xs, ys) = toy(40);
        let grid = geometric_grid(40, 1, 4).unwrap();
        let cfg = CvConfig { folds: 5, seed: 77 };
        let a = kfold_select(&xs, &ys, &grid, &cfg, 40, 1.0).unwrap();
        let b = kfold_select(&xs, &ys, &grid, &cfg, 40, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_cells_fall_back() {
        let (xs, ys) = toy(3);
        let grid = geometric_grid(3, 1, 4).unwrap();
        let out = kfold_select(&xs, &ys, &grid, &CvConfig::default(), 3, 1.0).unwrap();
        assert_eq!(out.folds_used, 3);
        assert!(out.risk.is_some());

        let out = kfold_select(&xs[..1], &ys[..1], &grid, &CvConfig::default(), 3, 1.0).unwrap();
        assert_eq!(out.folds_used, 0);
        assert_eq!((out.lambda_tilde, out.gamma), grid.median_pair());
        assert!(out.risk.is_none());
    }

    #[test]
    fn empty_cell_is_an_error() {
        let none: Vec<Vec<f64>> = vec![];
        let grid = HyperGrid::single(0.1, 1.0).unwrap();
        assert!(kfold_select(&none, &[], &grid, &CvConfig::default(), 1, 1.0).is_err());
    }

    #[test]
    fn global_lambda_is_rescaled() {
        let (xs, ys) = toy(10);
        let grid = HyperGrid::single(0.02, 0.5).unwrap();
        let out = kfold_select(&xs, &ys, &grid, &CvConfig::default(), 40, 1.0).unwrap();
        assert!((out.lambda - 0.02 * 10.0 / 40.0).abs() < 1e-15);
    }
}

//! Train/validation selection over a Voronoi partition.
//!
//! The first `l = floor(n/2) + 1` samples (D1) train, the rest (D2)
//! validate. Every cell picks its own pair from the nets by minimizing the
//! D2 risk restricted to that cell. Because the restricted risks add up to
//! the D2 risk of the combined predictor, choosing per cell also minimizes
//! the combined risk over all per-cell parameter assignments.

use serde::{Deserialize, Serialize};

use super::{argmin_lex, geometric_values, gram, CrossKernel, GridScore, HyperGrid};
use crate::data::Dataset;
use crate::kernel::{clip, CellModel};
use crate::parallel::par_map;
use crate::partition::VoronoiPartition;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvConfig {
    /// Number of lambda values in the net of `(0, r^d]`.
    pub lambda_size: usize,
    /// Number of gamma values in the net of `(0, r]`.
    pub gamma_size: usize,
    /// Relative lower end of the lambda net, `r^d * eps`. Defaults to `1/n`.
    pub lambda_density: Option<f64>,
    /// Relative lower end of the gamma net, `r * delta`. Defaults to
    /// `n^(-1/(2+d))`.
    pub gamma_density: Option<f64>,
    /// Use these nets instead of the geometric ones.
    pub explicit: Option<HyperGrid>,
}

impl Default for TvConfig {
    fn default() -> Self {
        TvConfig {
            lambda_size: 10,
            gamma_size: 10,
            lambda_density: None,
            gamma_density: None,
            explicit: None,
        }
    }
}

fn net(upper: f64, density: f64, size: usize) -> Result<Vec<f64>> {
    let lower = upper * density;
    if size == 1 || !(lower < upper) {
        return Ok(vec![upper]);
    }
    geometric_values(lower, upper, size)
}

impl TvConfig {
    /// The nets `Lambda ⊂ (0, r^d]` and `Gamma ⊂ (0, r]` for `n` samples in
    /// dimension `dim`.
    pub fn nets(&self, radius: f64, dim: usize, n: usize) -> Result<HyperGrid> {
        let lambda_max = radius.powi(dim as i32);
        let grid = match &self.explicit {
            Some(g) => g.clone(),
            None => {
                if self.lambda_size == 0 || self.gamma_size == 0 {
                    return Err(Error::config("nets need at least one value"));
                }
                let nf = n as f64;
                let eps = self.lambda_density.unwrap_or(1.0 / nf);
                let delta = self.gamma_density.unwrap_or(nf.powf(-1.0 / (2.0 + dim as f64)));
                HyperGrid::new(
                    net(lambda_max, eps, self.lambda_size)?,
                    net(radius, delta, self.gamma_size)?,
                )?
            }
        };
        if grid.lambdas().iter().any(|&l| l > lambda_max) {
            return Err(Error::config(format!("lambda net exceeds r^d = {lambda_max}")));
        }
        if grid.gammas().iter().any(|&g| g > radius) {
            return Err(Error::config(format!("gamma net exceeds r = {radius}")));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvCellResult {
    /// `None` for a cell without D1 samples (zero model).
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    /// Minimal restricted validation risk of this cell.
    pub risk: f64,
    pub train_size: usize,
    pub validation_size: usize,
    pub scores: Vec<GridScore>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvSelection {
    pub cells: Vec<TvCellResult>,
    /// D1-trained winners, index-aligned with the cells.
    pub models: Vec<CellModel>,
    /// `l`, the size of D1.
    pub train_len: usize,
    pub validation_len: usize,
}

impl TvSelection {
    /// Sum over cells of the minimal restricted validation risks.
    pub fn risk_sum(&self) -> f64 {
        self.cells.iter().map(|c| c.risk).sum()
    }
}

pub fn tv_select(
    train: &Dataset,
    partition: &VoronoiPartition,
    cfg: &TvConfig,
    clip_bound: f64,
) -> Result<TvSelection> {
    let n = train.len();
    if n < 4 {
        return Err(Error::InsufficientSamples { needed: 4, available: n });
    }
    if partition.assignment.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: partition.assignment.len(),
        });
    }
    let l = n / 2 + 1;
    let n_val = n - l;
    let grid = cfg.nets(partition.cover.radius, train.dim(), n)?;
    let samples = train.samples();

    let per_cell = par_map(&partition.cells, |_, members| -> Result<(TvCellResult, CellModel)> {
        let (d1, d2): (Vec<usize>, Vec<usize>) = members.iter().partition(|&&i| i < l);
        let tp: Vec<&[f64]> = d1.iter().map(|&i| samples[i].features.as_slice()).collect();
        let ty: Vec<f64> = d1.iter().map(|&i| samples[i].label).collect();
        let vp: Vec<&[f64]> = d2.iter().map(|&i| samples[i].features.as_slice()).collect();
        let vy: Vec<f64> = d2.iter().map(|&i| samples[i].label).collect();

        if d1.is_empty() {
            let sse: f64 = vy.iter().map(|y| (y - clip(0.0, clip_bound)).powi(2)).sum();
            return Ok((
                TvCellResult {
                    lambda: None,
                    gamma: None,
                    risk: sse / n_val as f64,
                    train_size: 0,
                    validation_size: d2.len(),
                    scores: Vec::new(),
                },
                CellModel::zero(clip_bound),
            ));
        }

        let (nl, ng) = (grid.lambdas().len(), grid.gammas().len());
        let mut risk = vec![vec![0.0; ng]; nl];
        let mut alphas: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); ng]; nl];
        for (gi, &gamma) in grid.gammas().iter().enumerate() {
            let k = gram(&tp, gamma);
            let cross = CrossKernel::new(&vp, &tp, gamma);
            for (li, &lambda) in grid.lambdas().iter().enumerate() {
                let alpha = k.solve_shifted(l as f64 * lambda, &ty)?;
                risk[li][gi] = cross.clipped_sse(&alpha, &vy, clip_bound) / n_val as f64;
                alphas[li][gi] = alpha;
            }
        }
        let (bl, bg) = argmin_lex(&risk);
        let (lambda, gamma) = (grid.lambdas()[bl], grid.gammas()[bg]);
        let model = CellModel {
            support_inputs: tp.iter().map(|p| p.to_vec()).collect(),
            alpha: std::mem::take(&mut alphas[bl][bg]),
            gamma,
            lambda_tilde: l as f64 * lambda / tp.len() as f64,
            clip_bound,
        };
        let scores = grid
            .lambdas()
            .iter()
            .enumerate()
            .flat_map(|(li, &lam)| {
                let risk = &risk;
                grid.gammas().iter().enumerate().map(move |(gi, &g)| GridScore {
                    lambda: lam,
                    gamma: g,
                    risk: risk[li][gi],
                    fold_risks: Vec::new(),
                })
            })
            .collect();
        Ok((
            TvCellResult {
                lambda: Some(lambda),
                gamma: Some(gamma),
                risk: risk[bl][bg],
                train_size: d1.len(),
                validation_size: d2.len(),
                scores,
            },
            model,
        ))
    });

    let mut cells = Vec::with_capacity(per_cell.len());
    let mut models = Vec::with_capacity(per_cell.len());
    for r in per_cell {
        let (c, m) = r?;
        cells.push(c);
        models.push(m);
    }
    Ok(TvSelection {
        cells,
        models,
        train_len: l,
        validation_len: n_val,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Sample;
    use crate::partition::{voronoi_partition, CoverInit};

    fn line_data(n: usize) -> Dataset {
        let samples = (0..n)
            .map(|i| {
                let x = ((i * 37) % n) as f64 / n as f64 * 2.0 - 1.0;
                Sample::new(vec![x], (2.0 * x).sin() * 0.7)
            })
            .collect();
        Dataset::new(samples, 1).unwrap()
    }

    #[test]
    fn nets_respect_their_bounds() {
        let g = TvConfig::default().nets(0.5, 2, 100).unwrap();
        assert_eq!(*g.lambdas().last().unwrap(), 0.25);
        assert_eq!(*g.gammas().last().unwrap(), 0.5);
        assert!((g.lambdas()[0] - 0.25 / 100.0).abs() < 1e-15);
        let bad = TvConfig {
            explicit: Some(HyperGrid::single(1.0, 0.1).unwrap()),
            ..TvConfig::default()
        };
        assert!(bad.nets(0.5, 1, 100).is_err());
    }

    #[test]
    fn too_few_samples() {
        let data = line_data(3);
        let part = voronoi_partition(&data.inputs(), 10.0, CoverInit::First).unwrap();
        assert!(tv_select(&data, &part, &TvConfig::default(), 1.0).is_err());
    }

    #[test]
    fn split_sizes() {
        let data = line_data(41);
        let part = voronoi_partition(&data.inputs(), 0.6, CoverInit::First).unwrap();
        let sel = tv_select(&data, &part, &TvConfig::default(), 1.0).unwrap();
        assert_eq!(sel.train_len, 21);
        assert_eq!(sel.validation_len, 20);
        assert_eq!(sel.cells.iter().map(|c| c.train_size).sum::<usize>(), 21);
        assert_eq!(sel.cells.iter().map(|c| c.validation_size).sum::<usize>(), 20);
        assert_eq!(sel.models.len(), part.num_cells());
    }
}

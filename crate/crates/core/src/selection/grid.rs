use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Candidate regularizers and kernel widths, both strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperGrid {
    lambdas: Vec<f64>,
    gammas: Vec<f64>,
}

fn check_axis(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::config(format!("{name} grid is empty")));
    }
    if let Some(bad) = v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::config(format!("{name} grid value {bad} is not positive")));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config(format!("{name} grid is not strictly increasing")));
    }
    Ok(())
}

impl HyperGrid {
    pub fn new(lambdas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        check_axis("lambda", &lambdas)?;
        check_axis("gamma", &gammas)?;
        Ok(HyperGrid { lambdas, gammas })
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(lambdas: Vec<f64>, gammas: Vec<f64>) -> Self {
        HyperGrid { lambdas, gammas }
    }

    pub fn single(lambda: f64, gamma: f64) -> Result<Self> {
        Self::new(vec![lambda], vec![gamma])
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len() * self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Middle element of each axis (the lower one for even lengths). On a
    /// geometric axis this is its geometric median.
    pub fn median_pair(&self) -> (f64, f64) {
        (
            self.lambdas[(self.lambdas.len() - 1) / 2],
            self.gammas[(self.gammas.len() - 1) / 2],
        )
    }
}

/// `size` geometrically spaced values from `lo` to `hi`, both included exactly.
pub fn geometric_values(lo: f64, hi: f64, size: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(lo < hi) {
        return Err(Error::config(format!("geometric range [{lo}, {hi}] is empty or not positive")));
    }
    if size < 2 {
        return Err(Error::config(format!("a geometric grid needs at least 2 points, got {size}")));
    }
    let ratio = hi / lo;
    let last = (size - 1) as f64;
    let mut v: Vec<f64> = (0..size).map(|i| lo * ratio.powf(i as f64 / last)).collect();
    v[0] = lo;
    v[size - 1] = hi;
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Points per axis.
    pub size: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { size: 10 }
    }
}

impl GridConfig {
    pub fn for_cell(&self, n_cell: usize, dim: usize) -> Result<HyperGrid> {
        geometric_grid(n_cell, dim, self.size)
    }
}

/// The working-set grid: lambda over `[0.001 / n, 0.1]` and gamma over
/// `[0.5 * n^(-1/d), 10]`, where `n` is the working-set size.
pub fn geometric_grid(n_cell: usize, dim: usize, size: usize) -> Result<HyperGrid> {
    if n_cell == 0 || dim == 0 {
        return Err(Error::config("grid needs a nonempty cell and positive dimension"));
    }
    let n = n_cell as f64;
    let lambdas = geometric_values(0.001 / n, 0.1, size)?;
    let gammas = geometric_values(0.5 * n.powf(-1.0 / dim as f64), 10.0, size)?;
    HyperGrid::new(lambdas, gammas)
}

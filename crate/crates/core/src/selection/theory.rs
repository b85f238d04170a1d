use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Constants of the fixed schedules
/// `r_n = c1 n^(-1/(beta d))`, `lambda_n = c2 r_n^d / n`,
/// `gamma_n = c3 n^(-1/(2 alpha + d))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheorySchedule {
    pub beta: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub dim: usize,
    pub n: usize,
}

impl TheorySchedule {
    pub fn new(beta: f64, alpha: f64, dim: usize, n: usize) -> Self {
        TheorySchedule {
            beta,
            alpha,
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            dim,
            n,
        }
    }

    /// Whether `beta >= 2 alpha / d + 1`, which together with `c3 <= c1`
    /// keeps `gamma_n <= r_n`.
    pub fn width_condition_holds(&self) -> bool {
        self.beta >= 2.0 * self.alpha / self.dim as f64 + 1.0
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta > 1.0) {
            return Err(Error::config(format!("beta must exceed 1, got {}", self.beta)));
        }
        if !(self.alpha >= 1.0) {
            return Err(Error::config(format!("alpha must be at least 1, got {}", self.alpha)));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0 && self.c3 > 0.0) {
            return Err(Error::config("schedule constants must be positive"));
        }
        if self.c3 > self.c1 {
            return Err(Error::config(format!("need c3 <= c1, got c3 = {} > c1 = {}", self.c3, self.c1)));
        }
        if self.dim == 0 || self.n == 0 {
            return Err(Error::config("schedule needs positive dimension and sample count"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    pub radius: f64,
    pub lambda: f64,
    pub gamma: f64,
}

pub fn theory_params(sched: &TheorySchedule) -> Result<TheoryParams> {
    sched.validate()?;
    if !sched.width_condition_holds() {
        log::warn!(
            "beta = {} < 2 alpha / d + 1 = {}: gamma_n <= r_n is not guaranteed",
            sched.beta,
            2.0 * sched.alpha / sched.dim as f64 + 1.0
        );
    }
    let n = sched.n as f64;
    let d = sched.dim as f64;
    let radius = sched.c1 * n.powf(-1.0 / (sched.beta * d));
    let lambda = sched.c2 * radius.powi(sched.dim as i32) / n;
    let gamma = sched.c3 * n.powf(-1.0 / (2.0 * sched.alpha + d));
    Ok(TheoryParams { radius, lambda, gamma })
}

//! Independent reference computations for the integration tests. Nothing
//! here calls into the crate's numerics.
#![allow(dead_code)]

use locsvm::data::{Dataset, Sample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect()
}

/// Smooth target plus bounded noise, labels in [-1, 1].
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dataset {
    let samples = uniform_points(rng, n, d)
        .into_iter()
        .map(|x| {
            let s: f64 = x.iter().sum();
            let y = (0.7 * (2.0 * s).sin() + rng.random_range(-0.3..=0.3)).clamp(-1.0, 1.0);
            Sample::new(x, y)
        })
        .collect();
    Dataset::new(samples, d).unwrap()
}

pub fn naive_gram(points: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| {
                    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                    (-d2 / (gamma * gamma)).exp()
                })
                .collect()
        })
        .collect()
}

pub fn matvec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Conjugate gradients on `(a + shift I) x = b` until the residual 2-norm
/// drops below `tol`.
pub fn cg_solve(a: &[Vec<f64>], shift: f64, b: &[f64], tol: f64) -> Vec<f64> {
    let n = b.len();
    let apply = |v: &[f64]| -> Vec<f64> {
        matvec(a, v).iter().zip(v).map(|(av, x)| av + shift * x).collect()
    };
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for _ in 0..50 * n.max(1) {
        if rr.sqrt() <= tol {
            break;
        }
        let ap = apply(&p);
        let step = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rr_new = dot(&r, &r);
        for i in 0..n {
            p[i] = r[i] + rr_new / rr * p[i];
        }
        rr = rr_new;
    }
    x
}

/// `shift/m * a'Ka + 1/m * |y - Ka|^2`, the regularized empirical risk of
/// `f = sum a_i k(x_i, .)` with `shift = m * lambda_tilde`.
pub fn ls_objective(k: &[Vec<f64>], shift: f64, alpha: &[f64], y: &[f64]) -> f64 {
    let m = y.len() as f64;
    let ka = matvec(k, alpha);
    let reg = shift * dot(alpha, &ka);
    let fit: f64 = y.iter().zip(&ka).map(|(y, f)| (y - f) * (y - f)).sum();
    (reg + fit) / m
}

pub fn mse(pred: &[f64], data: &Dataset) -> f64 {
    pred.iter()
        .zip(data.samples())
        .map(|(p, s)| (p - s.label).powi(2))
        .sum::<f64>()
        / data.len() as f64
}

/// Regular query grid over [-1, 1]^d with about `total` points.
pub fn query_grid(d: usize, total: usize) -> Vec<Vec<f64>> {
    let per_axis = (total as f64).powf(1.0 / d as f64).round().max(2.0) as usize;
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| -1.0 + 2.0 * i as f64 / (per_axis - 1) as f64)
        .collect();
    let mut pts = vec![Vec::new()];
    for _ in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    pts
}

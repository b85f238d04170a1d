mod common;

use common::*;
use locsvm::kernel::{train_cell, train_cell_local, KernelMatrix};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn spd_solve_matches_conjugate_gradients() {
    let mut r = rng(11);
    for _ in 0..60 {
        let n = r.random_range(1..=30);
        let d = r.random_range(1..=3);
        let x = uniform_points(&mut r, n, d);
        let y: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..=1.0)).collect();
        let gamma = 10f64.powf(r.random_range(-1.0..1.0));
        let shift = n as f64 * 10f64.powf(r.random_range(-3.0..-1.0));

        let alpha = KernelMatrix::new(&x, gamma).solve_shifted(shift, &y).unwrap();
        let k = naive_gram(&x, gamma);
        let oracle = cg_solve(&k, shift, &y, 1e-12);
        let scale = norm_inf(&oracle).max(1e-300);
        let diff: Vec<f64> = alpha.iter().zip(&oracle).map(|(a, b)| a - b).collect();
        assert!(norm_inf(&diff) <= 1e-8 * scale, "n={n} gamma={gamma} shift={shift}");

        let resid: Vec<f64> = matvec(&k, &alpha)
            .iter()
            .zip(&alpha)
            .zip(&y)
            .map(|((ka, a), y)| ka + shift * a - y)
            .collect();
        assert!(norm_inf(&resid) <= 1e-8 * norm_inf(&y).max(1e-300));
    }
}

#[test]
fn solution_minimizes_the_regularized_risk() {
    let mut r = rng(5);
    for _ in 0..30 {
        let n = r.random_range(2..=25);
        let x = uniform_points(&mut r, n, 2);
        let y: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..=1.0)).collect();
        let lambda_tilde = 10f64.powf(r.random_range(-3.0..-1.0));
        let gamma = 0.7;
        let m = train_cell_local(&x, &y, lambda_tilde, gamma, 1.0).unwrap();
        let k = naive_gram(&x, gamma);
        let shift = n as f64 * lambda_tilde;
        let best = ls_objective(&k, shift, &m.alpha, &y);
        for _ in 0..20 {
            let eps = 10f64.powf(r.random_range(-4.0..-1.0));
            let v: Vec<f64> = (0..n).map(|_| eps * r.random_range(-1.0..=1.0)).collect();
            let moved: Vec<f64> = m.alpha.iter().zip(&v).map(|(a, b)| a + b).collect();
            assert!(ls_objective(&k, shift, &moved, &y) >= best - 1e-12 * best.abs().max(1.0));
        }
    }
}

#[test]
fn global_and_local_regularizer_forms_agree() {
    let mut r = rng(8);
    let x = uniform_points(&mut r, 17, 1);
    let y: Vec<f64> = (0..17).map(|_| r.random_range(-1.0..=1.0)).collect();
    let n_global = 200;
    let lambda = 3e-4;
    let a = train_cell(&x, &y, lambda, 0.5, n_global, 1.0).unwrap();
    let b = train_cell_local(&x, &y, n_global as f64 * lambda / 17.0, 0.5, 1.0).unwrap();
    for (p, q) in a.alpha.iter().zip(&b.alpha) {
        assert!((p - q).abs() <= 1e-12 * p.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_matrix_is_positive_semidefinite(
        pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..20),
        gamma in 0.05f64..5.0,
        v in prop::collection::vec(-1.0f64..1.0, 20),
    ) {
        let k = KernelMatrix::new(&pts, gamma);
        let v = &v[..pts.len()];
        let q = dot(v, &k.mul_vec(v));
        prop_assert!(q >= -1e-12 * dot(v, v).max(1.0));
        for i in 0..pts.len() {
            prop_assert_eq!(k.get(i, i), 1.0);
            for j in 0..pts.len() {
                prop_assert_eq!(k.get(i, j), k.get(j, i));
            }
        }
    }

    #[test]
    fn clipping_never_increases_pointwise_loss(t in -10.0f64..10.0, y in -1.0f64..=1.0) {
        let c = locsvm::clip(t, 1.0);
        prop_assert!((y - c).abs() <= (y - t).abs());
    }
}

mod common;

use common::*;
use locsvm::data::{Dataset, Sample};
use locsvm::partition::{voronoi_partition, CoverInit};
use locsvm::selection::{tv_select, HyperGrid, TvConfig};
use rand::Rng;

/// D2 risk of the predictor assembled from the selected cell models.
fn assembled_validation_risk(data: &Dataset, radius: f64, cfg: &TvConfig) -> (f64, f64) {
    let part = voronoi_partition(&data.inputs(), radius, CoverInit::First).unwrap();
    let sel = tv_select(data, &part, cfg, 1.0).unwrap();
    let l = data.len() / 2 + 1;
    let val = &data.samples()[l..];
    let sse: f64 = val
        .iter()
        .map(|s| {
            let j = part.cover.cell_of(&s.features);
            (s.label - sel.models[j].predict_clipped(&s.features)).powi(2)
        })
        .sum();
    (sse / val.len() as f64, sel.risk_sum())
}

#[test]
fn validation_risk_is_the_sum_of_cell_minima() {
    let mut r = rng(30);
    for _ in 0..8 {
        let d = r.random_range(1..=2);
        let n = r.random_range(20..=150);
        let data = random_dataset(&mut r, n, d);
        let radius = r.random_range(0.2..1.0);
        let cfg = TvConfig {
            lambda_size: 4,
            gamma_size: 4,
            ..TvConfig::default()
        };
        let (assembled, sum) = assembled_validation_risk(&data, radius, &cfg);
        assert!((assembled - sum).abs() <= 1e-10 * data.len() as f64);
    }
}

#[test]
fn per_cell_choice_beats_every_shared_pair() {
    // Left half is smooth, right half oscillates fast, so the two cells want
    // different widths.
    let mut r = rng(31);
    let samples: Vec<Sample> = (0..120)
        .map(|_| {
            let x: f64 = r.random_range(-1.0..=1.0);
            let y = if x < 0.0 { 0.5 * x } else { 0.8 * (25.0 * x).sin() };
            Sample::new(vec![x], y)
        })
        .collect();
    let data = Dataset::new(samples, 1).unwrap();
    let part = voronoi_partition(&data.inputs(), 1.0, CoverInit::First).unwrap();
    assert_eq!(part.num_cells(), 2);

    let lambdas = vec![1e-5, 1e-3];
    let gammas = vec![0.05, 0.5, 1.0];
    let grid = HyperGrid::new(lambdas.clone(), gammas.clone()).unwrap();
    let per_cell = tv_select(
        &data,
        &part,
        &TvConfig {
            explicit: Some(grid),
            ..TvConfig::default()
        },
        1.0,
    )
    .unwrap()
    .risk_sum();

    let mut best_shared = f64::INFINITY;
    for &lam in &lambdas {
        for &g in &gammas {
            let single = HyperGrid::single(lam, g).unwrap();
            let shared = tv_select(
                &data,
                &part,
                &TvConfig {
                    explicit: Some(single),
                    ..TvConfig::default()
                },
                1.0,
            )
            .unwrap()
            .risk_sum();
            assert!(per_cell <= shared + 1e-15);
            best_shared = best_shared.min(shared);
        }
    }
    assert!(per_cell < best_shared);
}

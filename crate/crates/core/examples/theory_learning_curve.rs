//! Learning curve with the fixed theoretical schedules on Type V data,
//! written as CSV for log-log plotting.
//!
//!     cargo run --release --example theory_learning_curve

use locsvm::data::DataType;
use locsvm::estimators::Method;
use locsvm::evaluation::{benchmark, BenchmarkSpec, DataSource, MethodSpec};
use locsvm::TrainConfig;

fn main() -> locsvm::Result<()> {
    let result = benchmark(&BenchmarkSpec {
        data: DataSource::Synthetic(DataType::V),
        methods: vec![MethodSpec::Theory {
            beta: 3.0,
            alpha: 1.0,
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
        }],
        sizes: vec![250, 500, 1000, 2000, 4000, 8000],
        n_test: 10_000,
        repetitions: 5,
        seed: 0,
        train: TrainConfig::default(),
    })?;
    println!("n_train,test_err_mean,l2_mean");
    for (n, err, l2) in result.learning_curve(Method::Theory) {
        println!("{n},{err},{}", l2.unwrap_or(f64::NAN));
    }
    Ok(())
}

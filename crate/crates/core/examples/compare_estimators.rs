//! VP-SVM against the global LS-SVM and random chunks on Type I data.
//!
//!     cargo run --release --example compare_estimators

use locsvm::data::{generate_synthetic, DataType, SyntheticSpec};
use locsvm::estimators::{train_global, train_rc_svm, train_vp_svm};
use locsvm::evaluation::{empirical_risk, l2_error};
use locsvm::{Model, TrainConfig, TrainReport};

fn main() -> locsvm::Result<()> {
    let data = generate_synthetic(&SyntheticSpec {
        data_type: DataType::I,
        n_train: 2000,
        n_test: 5000,
        seed: 0,
    });
    let (train, test) = (data.train_dataset(), data.test_dataset());
    let cfg = TrainConfig::default();

    let runs: Vec<(String, (Model, TrainReport))> = vec![
        ("vp r=0.25".into(), train_vp_svm(&train, 0.25, &cfg).map(|(m, r)| (m.into(), r))?),
        ("rc k=10".into(), train_rc_svm(&train, 10, &cfg, 0).map(|(m, r)| (m.into(), r))?),
        ("global".into(), train_global(&train, &cfg).map(|(m, r)| (m.into(), r))?),
    ];

    println!("{:<10} {:>8} {:>8} {:>8} {:>4}", "method", "test", "l2", "train_s", "ws");
    for (name, (model, report)) in &runs {
        println!(
            "{name:<10} {:>8.4} {:>8.4} {:>8.2} {:>4}",
            empirical_risk(|x| model.predict(x), &test)?,
            l2_error(|x| model.predict(x), &data.test)?,
            report.train_seconds,
            report.num_working_sets
        );
    }
    Ok(())
}

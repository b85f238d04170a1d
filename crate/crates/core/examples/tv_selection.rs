//! Train/validation selection: every cell gets its own (lambda, gamma).
//!
//!     cargo run --release --example tv_selection

use locsvm::data::{generate_synthetic, DataType, SyntheticSpec};
use locsvm::estimators::train_tv_vp_svm;
use locsvm::evaluation::empirical_risk;
use locsvm::selection::TvConfig;
use locsvm::TrainConfig;

fn main() -> locsvm::Result<()> {
    let data = generate_synthetic(&SyntheticSpec {
        data_type: DataType::II,
        n_train: 3000,
        n_test: 5000,
        seed: 2,
    });
    let (model, report) = train_tv_vp_svm(&data.train_dataset(), 0.25, &TvConfig::default(), &TrainConfig::default())?;

    println!("cell  size  lambda      gamma     val_risk");
    for (j, (choice, size)) in model.selection.iter().zip(&report.cell_sizes).enumerate() {
        match choice {
            Some(c) => println!(
                "{j:>4}  {size:>4}  {:<10.3e}  {:<8.4}  {:.5}",
                c.lambda,
                c.gamma,
                c.risk.unwrap_or(f64::NAN)
            ),
            None => println!("{j:>4}  {size:>4}  (no training points)"),
        }
    }
    let test = data.test_dataset();
    println!("test error {:.4}", empirical_risk(|x| model.predict(x), &test)?);
    Ok(())
}

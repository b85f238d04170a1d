//! Generates every synthetic data type and prints its Bayes risk estimate.
//!
//!     cargo run --release --example synthetic_bayes_risk

use locsvm::data::{estimate_bayes_risk, generate_synthetic, DataType, SyntheticSpec};

fn main() -> locsvm::Result<()> {
    println!("type  dim  bayes_risk");
    for ty in DataType::ALL {
        let data = generate_synthetic(&SyntheticSpec {
            data_type: ty,
            n_train: 1000,
            n_test: 10_000,
            seed: 1,
        });
        println!("{:>4}  {:>3}  {:.4}", ty.to_string(), ty.dim(), estimate_bayes_risk(&data.test)?);
    }
    Ok(())
}

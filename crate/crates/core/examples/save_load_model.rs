//! Trains a VP-SVM, stores it as JSON and predicts with the reloaded copy.
//!
//!     cargo run --release --example save_load_model

use locsvm::data::{generate_synthetic, DataType, SyntheticSpec};
use locsvm::estimators::train_vp_svm;
use locsvm::parallel::Workers;
use locsvm::{Model, TrainConfig};

fn main() -> locsvm::Result<()> {
    let data = generate_synthetic(&SyntheticSpec {
        data_type: DataType::III,
        n_train: 800,
        n_test: 5,
        seed: 4,
    });
    let (model, _) = train_vp_svm(&data.train_dataset(), 0.3, &TrainConfig::default())?;
    let model = Model::from(model);

    let path = std::env::temp_dir().join("locsvm_example_model.json");
    model.save_file(&path)?;
    let loaded = Model::load_file(&path)?;
    println!("saved {} working sets to {}", loaded.num_working_sets(), path.display());

    let test = data.test_dataset();
    let preds = loaded.predict_batch(&test, Workers::default())?;
    for ((s, p), t) in test.samples().iter().zip(&preds).zip(&data.test) {
        println!("x = {:+.3}  y = {:+.3}  f(x) = {:+.3}  pred = {:+.3}", s.features[0], s.label, t.bayes_value, p);
    }
    assert_eq!(preds, model.predict_batch(&test, Workers::default())?);
    Ok(())
}

//! Datasets: LIBSVM text I/O, componentwise scaling to [-1, 1], seeded
//! train/test splits and the five synthetic regression problems.

mod dataset;
pub mod libsvm;
pub mod scaling;
pub mod synthetic;

pub use dataset::{split_train_test, Dataset, Sample};
pub use libsvm::{parse_libsvm, read_libsvm_file, write_libsvm, write_libsvm_file};
pub use scaling::{apply_scaling, fit_scaling, ScalingTransform};
pub use synthetic::{
    estimate_bayes_risk, generate_synthetic, read_truth_csv, write_truth_csv, DataType,
    LabeledTruth, SyntheticData, SyntheticSpec,
};

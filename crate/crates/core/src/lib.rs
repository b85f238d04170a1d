//! Localized least-squares support vector machines.
//!
//! The input space is covered by balls around centers picked with
//! farthest-first traversal, the induced Voronoi cells become independent
//! working sets, and each working set gets its own clipped least-squares SVM
//! with a Gaussian kernel. Hyperparameters are chosen per cell, either by
//! k-fold cross-validation over a geometric grid or by a train/validation
//! split. Global and random-chunk baselines share the same solver so the
//! three can be compared directly.
//!
//! The main entry points are in [`estimators`]; [`evaluation`] computes test
//! error, L2 error and benchmark tables; [`data`] reads LIBSVM files and
//! generates the synthetic regression problems.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod estimators;
pub mod evaluation;
pub mod kernel;
pub mod parallel;
pub mod partition;
pub mod rng;
pub mod selection;

pub use error::{Error, Result};
pub use estimators::{Model, RcSvmModel, TrainConfig, TrainReport, VpSvmModel};
pub use kernel::{clip, CellModel, GaussianKernel};
pub use partition::{Cover, VoronoiPartition};

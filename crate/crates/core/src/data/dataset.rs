use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::ScalingTransform;
use crate::rng::{self, purpose};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: f64,
}

impl Sample {
    pub fn new(features: Vec<f64>, label: f64) -> Self {
        Sample { features, label }
    }
}

impl AsRef<[f64]> for Sample {
    fn as_ref(&self) -> &[f64] {
        &self.features
    }
}

/// An ordered list of samples that all share the input dimension `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    samples: Vec<Sample>,
    dim: usize,
    scaling: Option<ScalingTransform>,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, dim: usize) -> Result<Self> {
        if let Some(bad) = samples.iter().find(|s| s.features.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.features.len(),
            });
        }
        Ok(Dataset {
            samples,
            dim,
            scaling: None,
        })
    }

    /// Builds a dataset whose dimension is taken from the first sample.
    pub fn from_samples(samples: Vec<Sample>) -> Result<Self> {
        let dim = samples.first().map_or(0, |s| s.features.len());
        Self::new(samples, dim)
    }

    pub fn empty(dim: usize) -> Self {
        Dataset {
            samples: Vec::new(),
            dim,
            scaling: None,
        }
    }

    pub fn with_scaling(mut self, scaling: Option<ScalingTransform>) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn scaling(&self) -> Option<&ScalingTransform> {
        self.scaling.as_ref()
    }

    pub fn inputs(&self) -> Vec<&[f64]> {
        self.samples.iter().map(|s| s.features.as_slice()).collect()
    }

    pub fn labels(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// The samples at `indices`, in that order, keeping the scaling record.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
            dim: self.dim,
            scaling: self.scaling.clone(),
        }
    }
}

/// Draws disjoint uniformly random train and test subsets. The order inside
/// each output follows the shuffled order, which later stages (the D1/D2
/// split of train/validation selection) rely on.
pub fn split_train_test(
    data: &Dataset,
    n_train: usize,
    n_test: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let needed = n_train + n_test;
    if needed > data.len() {
        return Err(Error::InsufficientSamples {
            needed,
            available: data.len(),
        });
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng::rng_for(seed, &[purpose::SPLIT]));
    let train = data.subset(&order[..n_train]);
    let test = data.subset(&order[n_train..needed]);
    Ok((train, test))
}

use serde::{Deserialize, Serialize};

use super::{Dataset, Sample};
use crate::{Error, Result};

/// Observed range of one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn degenerate(self) -> bool {
        self.max <= self.min
    }

    /// Affine map of `[min, max]` onto `[-1, 1]`; constant components map to 0.
    pub fn forward(self, v: f64) -> f64 {
        if self.degenerate() {
            0.0
        } else {
            2.0 * (v - self.min) / (self.max - self.min) - 1.0
        }
    }

    pub fn inverse(self, v: f64) -> f64 {
        if self.degenerate() {
            self.min
        } else {
            (v + 1.0) * (self.max - self.min) / 2.0 + self.min
        }
    }

    /// Derivative of [`Range::forward`].
    pub fn slope(self) -> f64 {
        if self.degenerate() {
            0.0
        } else {
            2.0 / (self.max - self.min)
        }
    }
}

/// Componentwise scaling of features and label to `[-1, 1]^{d+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTransform {
    pub features: Vec<Range>,
    pub label: Range,
}

impl ScalingTransform {
    pub fn identity(dim: usize) -> Self {
        let unit = Range { min: -1.0, max: 1.0 };
        ScalingTransform {
            features: vec![unit; dim],
            label: unit,
        }
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    pub fn scale_sample(&self, s: &Sample) -> Sample {
        Sample::new(
            s.features
                .iter()
                .zip(&self.features)
                .map(|(&v, r)| r.forward(v))
                .collect(),
            self.label.forward(s.label),
        )
    }

    pub fn unscale_sample(&self, s: &Sample) -> Sample {
        Sample::new(
            s.features
                .iter()
                .zip(&self.features)
                .map(|(&v, r)| r.inverse(v))
                .collect(),
            self.label.inverse(s.label),
        )
    }

    /// Maps a scaled dataset back to original units.
    pub fn invert(&self, data: &Dataset) -> Result<Dataset> {
        self.check_dim(data)?;
        let samples = data.samples().iter().map(|s| self.unscale_sample(s)).collect();
        Ok(Dataset::new(samples, data.dim())?.with_scaling(None))
    }

    fn check_dim(&self, data: &Dataset) -> Result<()> {
        if data.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: data.dim(),
            });
        }
        Ok(())
    }
}

pub fn fit_scaling(data: &Dataset) -> Result<ScalingTransform> {
    let first = data
        .samples()
        .first()
        .ok_or(Error::EmptyInput("cannot fit a scaling on an empty dataset"))?;
    let mut features: Vec<Range> = first
        .features
        .iter()
        .map(|&v| Range { min: v, max: v })
        .collect();
    let mut label = Range {
        min: first.label,
        max: first.label,
    };
    for s in data.samples() {
        for (r, &v) in features.iter_mut().zip(&s.features) {
            r.min = r.min.min(v);
            r.max = r.max.max(v);
        }
        label.min = label.min.min(s.label);
        label.max = label.max.max(s.label);
    }
    Ok(ScalingTransform { features, label })
}

/// Scales every sample. Values outside the fitted range are extrapolated
/// affinely, not clipped.
pub fn apply_scaling(t: &ScalingTransform, data: &Dataset) -> Result<Dataset> {
    t.check_dim(data)?;
    let samples = data.samples().iter().map(|s| t.scale_sample(s)).collect();
    Ok(Dataset::new(samples, data.dim())?.with_scaling(Some(t.clone())))
}

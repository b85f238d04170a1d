//! The five synthetic regression problems.
//!
//! Inputs are uniform on `[-1, 1]^d`. Labels are `f(x) + u1 + u2` with
//! `u1, u2` independent and uniform on `[-c(x), c(x)]`, so the conditional
//! noise variance is `2 c(x)^2 / 3`. Labels of train and test are scaled to
//! `[-1, 1]` together; the truth fields are reported in the same units.

use std::io::{Read, Write};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::scaling::Range;
use super::{Dataset, Sample, ScalingTransform};
use crate::rng::{self, purpose};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DataType {
    /// Four-level staircase on `[-1, 1]`.
    I,
    /// `|x|` with a jump at `x = 0.45`.
    II,
    /// Triangle wave with amplitude shrinking towards the boundary.
    III,
    /// Rings of constant height around the origin of `[-1, 1]^2`.
    IV,
    /// Euclidean norm on `[-1, 1]^2`.
    V,
}

// Amplitudes tuned so the label scaling (and therefore the Bayes risk in
// scaled units) lands on the published reference values. Type V is the plain
// norm.
const AMP_I: f64 = 2.0;
const AMP_II: f64 = 5.6;
const AMP_III: f64 = 7.0 / 3.0;
const RING_STEP_IV: f64 = 2.0;
const RING_WIDTH_IV: f64 = 0.35;

impl DataType {
    pub const ALL: [DataType; 5] = [DataType::I, DataType::II, DataType::III, DataType::IV, DataType::V];

    pub fn dim(self) -> usize {
        match self {
            DataType::I | DataType::II | DataType::III => 1,
            DataType::IV | DataType::V => 2,
        }
    }

    fn index(self) -> u64 {
        self as u64
    }

    /// Unscaled regression function.
    pub fn base_function(self, x: &[f64]) -> f64 {
        match self {
            DataType::I => {
                let step = (((x[0] + 1.0) * 2.0).floor() as i64).clamp(0, 3);
                AMP_I * [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0][step as usize]
            }
            DataType::II => {
                let jump = if x[0] > 0.45 { 0.5 } else { 0.0 };
                AMP_II * (x[0].abs() + jump)
            }
            DataType::III => {
                let t = (2.0 * x[0]).rem_euclid(1.0);
                let tri = 1.0 - 2.0 * (2.0 * t - 1.0).abs();
                AMP_III * (1.0 - x[0].abs()) * tri
            }
            DataType::IV => {
                let ring = (norm(x) / RING_WIDTH_IV).floor().min(3.0);
                RING_STEP_IV * ring
            }
            DataType::V => norm(x),
        }
    }

    /// Unscaled noise half-width `c(x)`.
    pub fn noise_halfwidth(self, x: &[f64]) -> f64 {
        match self.dim() {
            1 => 0.25 * (3.0 * (PI / 2.0 * x[0].abs()).sin() + 1.0),
            _ => 0.25 * ((PI / 4.0 * (x[0].abs() + x[1].abs())).sin() + 1.0),
        }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DataType::I => "I",
            DataType::II => "II",
            DataType::III => "III",
            DataType::IV => "IV",
            DataType::V => "V",
        };
        f.write_str(s)
    }
}

impl FromStr for DataType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(DataType::I),
            "II" | "2" => Ok(DataType::II),
            "III" | "3" => Ok(DataType::III),
            "IV" | "4" => Ok(DataType::IV),
            "V" | "5" => Ok(DataType::V),
            _ => Err(Error::config(format!("unknown data type {s:?} (expected I..V)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub data_type: DataType,
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
}

/// A generated sample together with the scaled regression value and noise
/// half-width at its input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledTruth {
    pub sample: Sample,
    pub bayes_value: f64,
    pub noise_halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub data_type: DataType,
    pub train: Vec<LabeledTruth>,
    pub test: Vec<LabeledTruth>,
    /// Range of the raw labels over train and test together.
    pub label_range: Range,
}

impl SyntheticData {
    pub fn scaling(&self) -> ScalingTransform {
        let mut t = ScalingTransform::identity(self.data_type.dim());
        t.label = self.label_range;
        t
    }

    pub fn train_dataset(&self) -> Dataset {
        self.to_dataset(&self.train)
    }

    pub fn test_dataset(&self) -> Dataset {
        self.to_dataset(&self.test)
    }

    fn to_dataset(&self, rows: &[LabeledTruth]) -> Dataset {
        let samples = rows.iter().map(|t| t.sample.clone()).collect();
        Dataset::new(samples, self.data_type.dim())
            .expect("generated samples share the type's dimension")
            .with_scaling(Some(self.scaling()))
    }
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> SyntheticData {
    let ty = spec.data_type;
    let dim = ty.dim();
    let mut rng = rng::rng_for(spec.seed, &[purpose::SYNTHETIC, ty.index()]);

    // (x, f(x), c(x), y) in raw units
    let total = spec.n_train + spec.n_test;
    let mut raw = Vec::with_capacity(total);
    for _ in 0..total {
        let x: Vec<f64> = (0..dim).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        let f = ty.base_function(&x);
        let c = ty.noise_halfwidth(&x);
        let u1 = c * (2.0 * rng.random::<f64>() - 1.0);
        let u2 = c * (2.0 * rng.random::<f64>() - 1.0);
        raw.push((x, f, c, f + u1 + u2));
    }

    let label_range = raw.iter().fold(
        Range {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        },
        |r, (_, _, _, y)| Range {
            min: r.min.min(*y),
            max: r.max.max(*y),
        },
    );
    let slope = label_range.slope();

    let mut truths: Vec<LabeledTruth> = raw
        .into_iter()
        .map(|(x, f, c, y)| LabeledTruth {
            sample: Sample::new(x, label_range.forward(y)),
            bayes_value: label_range.forward(f),
            noise_halfwidth: slope * c,
        })
        .collect();
    let test = truths.split_off(spec.n_train);
    SyntheticData {
        data_type: ty,
        train: truths,
        test,
        label_range,
    }
}

/// Mean conditional noise variance `2 c'(x)^2 / 3` over the given points,
/// with `c'` the half-width in scaled units.
pub fn estimate_bayes_risk(test: &[LabeledTruth]) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyInput("Bayes risk of an empty test set"));
    }
    let sum: f64 = test
        .iter()
        .map(|t| 2.0 * t.noise_halfwidth * t.noise_halfwidth / 3.0)
        .sum();
    Ok(sum / test.len() as f64)
}

/// CSV with columns `x1..xd, y, bayes_value, noise_halfwidth`.
pub fn write_truth_csv<W: Write>(rows: &[LabeledTruth], dim: usize, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    header.extend(["y", "bayes_value", "noise_halfwidth"].map(String::from));
    out.write_record(&header)?;
    for t in rows {
        let mut rec: Vec<String> = t.sample.features.iter().map(|v| v.to_string()).collect();
        rec.push(t.sample.label.to_string());
        rec.push(t.bayes_value.to_string());
        rec.push(t.noise_halfwidth.to_string());
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_truth_csv<R: Read>(r: R) -> Result<Vec<LabeledTruth>> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.len() < 3 {
        return Err(Error::Parse {
            line: 1,
            msg: "truth CSV needs at least y, bayes_value, noise_halfwidth".into(),
        });
    }
    let dim = headers.len() - 3;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: i + 2,
                msg: e.to_string(),
            })?;
        if vals.len() != dim + 3 {
            return Err(Error::Parse {
                line: i + 2,
                msg: format!("expected {} fields, found {}", dim + 3, vals.len()),
            });
        }
        rows.push(LabeledTruth {
            sample: Sample::new(vals[..dim].to_vec(), vals[dim]),
            bayes_value: vals[dim + 1],
            noise_halfwidth: vals[dim + 2],
        });
    }
    Ok(rows)
}

//! End-to-end trainers: Voronoi-partition SVMs (VP), random-chunk SVMs
//! (RC), the global LS-SVM, train/validation VP (TV) and the fixed-schedule
//! theory mode.
//!
//! The global LS-SVM is the VP-SVM with a single working set and goes
//! through exactly the same code, so the two agree bit for bit.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::kernel::{clip, train_cell, train_cell_local, CellModel};
use crate::parallel::{par_map, Workers};
use crate::partition::{
    assign_voronoi, dist, farthest_first_cover, Cover, CoverInit, VoronoiPartition,
};
use crate::rng::{self, derive_seed, purpose};
use crate::selection::{
    kfold_select, theory_params, tv_select, CvConfig, GridConfig, TheorySchedule, TraceRow,
    TvConfig,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Vp,
    Rc,
    Global,
    Tv,
    Theory,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Vp => "vp",
            Method::Rc => "rc",
            Method::Global => "global",
            Method::Tv => "tv",
            Method::Theory => "theory",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vp" => Ok(Method::Vp),
            "rc" => Ok(Method::Rc),
            "global" => Ok(Method::Global),
            "tv" => Ok(Method::Tv),
            "theory" => Ok(Method::Theory),
            _ => Err(Error::config(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub grid: GridConfig,
    pub cv: CvConfig,
    pub clip_bound: f64,
    pub workers: Workers,
    pub cover_init: CoverInit,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            grid: GridConfig::default(),
            cv: CvConfig::default(),
            clip_bound: 1.0,
            workers: Workers::default(),
            cover_init: CoverInit::First,
        }
    }
}

impl TrainConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.cv.seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Workers::new(workers);
        self
    }
}

/// Parameters a working set ended up with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellChoice {
    pub lambda_tilde: f64,
    /// Regularizer relative to the full training set size.
    pub lambda: f64,
    pub gamma: f64,
    /// Selection risk of the winner, when one was computed.
    pub risk: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VpSvmModel {
    pub method: Method,
    pub cover: Cover,
    pub cell_models: Vec<CellModel>,
    /// `None` for cells that had no training samples.
    pub selection: Vec<Option<CellChoice>>,
    pub clip_bound: f64,
}

impl VpSvmModel {
    pub fn num_cells(&self) -> usize {
        self.cell_models.len()
    }

    pub fn dim(&self) -> usize {
        self.cover.dim()
    }

    pub fn cell_of(&self, x: &[f64]) -> usize {
        self.cover.cell_of(x)
    }

    /// Unclipped value of the routed cell model.
    pub fn predict_raw(&self, x: &[f64]) -> f64 {
        self.cell_models[self.cover.cell_of(x)].predict(x)
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        clip(self.predict_raw(x), self.clip_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcSvmModel {
    pub chunk_models: Vec<CellModel>,
    pub selection: Vec<Option<CellChoice>>,
    pub clip_bound: f64,
    /// Clip every chunk prediction before averaging.
    pub clip_chunks: bool,
}

impl RcSvmModel {
    pub fn dim(&self) -> usize {
        self.chunk_models
            .iter()
            .find_map(|m| m.support_inputs.first().map(Vec::len))
            .unwrap_or(0)
    }

    /// Mean of the chunk predictions before the final clipping.
    pub fn predict_raw(&self, x: &[f64]) -> f64 {
        let sum: f64 = self
            .chunk_models
            .iter()
            .map(|m| if self.clip_chunks { m.predict_clipped(x) } else { m.predict(x) })
            .sum();
        sum / self.chunk_models.len() as f64
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        clip(self.predict_raw(x), self.clip_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub method: Method,
    pub train_seconds: f64,
    pub workers: usize,
    pub cell_sizes: Vec<usize>,
    pub num_working_sets: usize,
    pub ws_median: usize,
    pub ws_min: usize,
    pub ws_max: usize,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

impl TrainReport {
    fn new(method: Method, seconds: f64, workers: Workers, cell_sizes: Vec<usize>, trace: Vec<TraceRow>) -> Self {
        let mut sorted = cell_sizes.clone();
        sorted.sort_unstable();
        TrainReport {
            method,
            train_seconds: seconds,
            workers: workers.get(),
            num_working_sets: cell_sizes.len(),
            ws_median: sorted.get(sorted.len().saturating_sub(1) / 2).copied().unwrap_or(0),
            ws_min: sorted.first().copied().unwrap_or(0),
            ws_max: sorted.last().copied().unwrap_or(0),
            cell_sizes,
            trace,
        }
    }

    /// Report for already known working-set sizes, with an empty trace.
    pub fn from_sizes(method: Method, seconds: f64, workers: usize, cell_sizes: Vec<usize>) -> Self {
        Self::new(method, seconds, Workers::new(workers), cell_sizes, Vec::new())
    }
}

struct FittedSets {
    models: Vec<CellModel>,
    choices: Vec<Option<CellChoice>>,
    trace: Vec<TraceRow>,
}

/// Cross-validates and trains one model per working set.
fn fit_working_sets(train: &Dataset, sets: &[Vec<usize>], cfg: &TrainConfig) -> Result<FittedSets> {
    let n = train.len();
    let samples = train.samples();
    let results = par_map(sets, |j, members| -> Result<(CellModel, Option<CellChoice>, Vec<TraceRow>)> {
        if members.is_empty() {
            return Ok((CellModel::zero(cfg.clip_bound), None, Vec::new()));
        }
        let inputs: Vec<&[f64]> = members.iter().map(|&i| samples[i].features.as_slice()).collect();
        let labels: Vec<f64> = members.iter().map(|&i| samples[i].label).collect();
        let grid = cfg.grid.for_cell(members.len(), train.dim())?;
        let cv = CvConfig {
            folds: cfg.cv.folds,
            seed: derive_seed(cfg.cv.seed, &[j as u64]),
        };
        let out = kfold_select(&inputs, &labels, &grid, &cv, n, cfg.clip_bound)?;
        let model = train_cell_local(&inputs, &labels, out.lambda_tilde, out.gamma, cfg.clip_bound)?;
        let choice = CellChoice {
            lambda_tilde: out.lambda_tilde,
            lambda: out.lambda,
            gamma: out.gamma,
            risk: out.risk,
        };
        Ok((model, Some(choice), TraceRow::expand(j, &out.scores, false)))
    });
    let mut fitted = FittedSets {
        models: Vec::with_capacity(sets.len()),
        choices: Vec::with_capacity(sets.len()),
        trace: Vec::new(),
    };
    for r in results {
        let (m, c, t) = r?;
        fitted.models.push(m);
        fitted.choices.push(c);
        fitted.trace.extend(t);
    }
    Ok(fitted)
}

fn require_nonempty(train: &Dataset) -> Result<()> {
    if train.is_empty() {
        return Err(Error::EmptyInput("training set is empty"));
    }
    Ok(())
}

fn train_on_partition(
    train: &Dataset,
    partition: VoronoiPartition,
    method: Method,
    cfg: &TrainConfig,
    start: Instant,
) -> Result<(VpSvmModel, TrainReport)> {
    let fitted = fit_working_sets(train, &partition.cells, cfg)?;
    let model = VpSvmModel {
        method,
        cover: partition.cover.clone(),
        cell_models: fitted.models,
        selection: fitted.choices,
        clip_bound: cfg.clip_bound,
    };
    let report = TrainReport::new(
        method,
        start.elapsed().as_secs_f64(),
        cfg.workers,
        partition.cell_sizes(),
        fitted.trace,
    );
    Ok((model, report))
}

/// VP-SVM: farthest-first cover with the given radius, then per-cell
/// cross-validation and training.
pub fn train_vp_svm(train: &Dataset, radius: f64, cfg: &TrainConfig) -> Result<(VpSvmModel, TrainReport)> {
    require_nonempty(train)?;
    let start = Instant::now();
    cfg.workers.install(|| {
        let inputs = train.inputs();
        let cover = farthest_first_cover(&inputs, radius, cfg.cover_init)?;
        let partition = assign_voronoi(&inputs, &cover)?;
        train_on_partition(train, partition, Method::Vp, cfg, start)
    })
}

/// Radius of the smallest ball around the first center that holds all
/// training inputs; with this radius the cover has exactly one center.
fn single_ball_radius(train: &Dataset, init: CoverInit) -> Result<f64> {
    let inputs = train.inputs();
    let first = farthest_first_cover(&inputs, f64::MAX, init)?;
    let r = inputs.iter().map(|p| dist(p, &first.centers[0])).fold(0.0, f64::max);
    Ok(r.max(f64::MIN_POSITIVE))
}

/// Global LS-SVM: one working set holding every sample.
pub fn train_global(train: &Dataset, cfg: &TrainConfig) -> Result<(VpSvmModel, TrainReport)> {
    require_nonempty(train)?;
    let radius = single_ball_radius(train, cfg.cover_init)?;
    let (mut model, mut report) = train_vp_svm(train, radius, cfg)?;
    debug_assert_eq!(model.num_cells(), 1);
    model.method = Method::Global;
    report.method = Method::Global;
    Ok((model, report))
}

/// Balanced random partition of `0..n` into `k` chunks; the first `n % k`
/// chunks get one extra element. Indices inside a chunk are ascending.
pub fn random_chunks(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::rng_for(seed, &[purpose::CHUNKS]));
    let (base, extra) = (n / k, n % k);
    let mut chunks = Vec::with_capacity(k);
    let mut pos = 0;
    for c in 0..k {
        let len = base + usize::from(c < extra);
        let mut chunk = order[pos..pos + len].to_vec();
        chunk.sort_unstable();
        chunks.push(chunk);
        pos += len;
    }
    chunks
}

/// RC-SVM: LS-SVMs on a random balanced partition, predictions averaged.
pub fn train_rc_svm(
    train: &Dataset,
    num_chunks: usize,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<(RcSvmModel, TrainReport)> {
    require_nonempty(train)?;
    if num_chunks == 0 || num_chunks > train.len() {
        return Err(Error::config(format!(
            "number of chunks must be in 1..={}, got {num_chunks}",
            train.len()
        )));
    }
    let start = Instant::now();
    cfg.workers.install(|| {
        let chunks = random_chunks(train.len(), num_chunks, seed);
        let fitted = fit_working_sets(train, &chunks, cfg)?;
        let model = RcSvmModel {
            chunk_models: fitted.models,
            selection: fitted.choices,
            clip_bound: cfg.clip_bound,
            clip_chunks: true,
        };
        let sizes = chunks.iter().map(Vec::len).collect();
        let report = TrainReport::new(Method::Rc, start.elapsed().as_secs_f64(), cfg.workers, sizes, fitted.trace);
        Ok((model, report))
    })
}

/// TV-VP-SVM: partition built on all inputs, per-cell parameters chosen on
/// the second half of the data, models trained on the first half.
pub fn train_tv_vp_svm(
    train: &Dataset,
    radius: f64,
    tv: &TvConfig,
    cfg: &TrainConfig,
) -> Result<(VpSvmModel, TrainReport)> {
    require_nonempty(train)?;
    let start = Instant::now();
    cfg.workers.install(|| {
        let inputs = train.inputs();
        let cover = farthest_first_cover(&inputs, radius, cfg.cover_init)?;
        let partition = assign_voronoi(&inputs, &cover)?;
        let sel = tv_select(train, &partition, tv, cfg.clip_bound)?;
        let selection = sel
            .cells
            .iter()
            .zip(&sel.models)
            .map(|(c, m)| {
                c.lambda.zip(c.gamma).map(|(lambda, gamma)| CellChoice {
                    lambda_tilde: m.lambda_tilde,
                    lambda,
                    gamma,
                    risk: Some(c.risk),
                })
            })
            .collect();
        let trace = sel
            .cells
            .iter()
            .enumerate()
            .flat_map(|(j, c)| TraceRow::expand(j, &c.scores, true))
            .collect();
        let model = VpSvmModel {
            method: Method::Tv,
            cover,
            cell_models: sel.models,
            selection,
            clip_bound: cfg.clip_bound,
        };
        let report = TrainReport::new(Method::Tv, start.elapsed().as_secs_f64(), cfg.workers, partition.cell_sizes(), trace);
        Ok((model, report))
    })
}

/// Theory mode: radius, regularizer and width from the fixed schedules,
/// shared by all cells, no selection.
pub fn train_theory_mode(
    train: &Dataset,
    sched: &TheorySchedule,
    cfg: &TrainConfig,
) -> Result<(VpSvmModel, TrainReport)> {
    require_nonempty(train)?;
    if sched.n != train.len() || sched.dim != train.dim() {
        return Err(Error::config(format!(
            "schedule is for n = {}, d = {} but data has n = {}, d = {}",
            sched.n,
            sched.dim,
            train.len(),
            train.dim()
        )));
    }
    let params = theory_params(sched)?;
    let start = Instant::now();
    cfg.workers.install(|| {
        let inputs = train.inputs();
        let cover = farthest_first_cover(&inputs, params.radius, cfg.cover_init)?;
        let partition = assign_voronoi(&inputs, &cover)?;
        let samples = train.samples();
        let n = train.len();
        let models = par_map(&partition.cells, |_, members| {
            let xs: Vec<&[f64]> = members.iter().map(|&i| samples[i].features.as_slice()).collect();
            let ys: Vec<f64> = members.iter().map(|&i| samples[i].label).collect();
            train_cell(&xs, &ys, params.lambda, params.gamma, n, cfg.clip_bound)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let selection = models
            .iter()
            .map(|m| {
                (!m.is_zero()).then_some(CellChoice {
                    lambda_tilde: m.lambda_tilde,
                    lambda: params.lambda,
                    gamma: params.gamma,
                    risk: None,
                })
            })
            .collect();
        let model = VpSvmModel {
            method: Method::Theory,
            cover,
            cell_models: models,
            selection,
            clip_bound: cfg.clip_bound,
        };
        let report = TrainReport::new(
            Method::Theory,
            start.elapsed().as_secs_f64(),
            cfg.workers,
            partition.cell_sizes(),
            Vec::new(),
        );
        Ok((model, report))
    })
}

const MODEL_FORMAT: &str = "locsvm-model";
const MODEL_VERSION: u32 = 1;

/// Any trained predictor, as stored in a model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Voronoi(VpSvmModel),
    Chunks(RcSvmModel),
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    dim: usize,
    model: Model,
}

impl From<VpSvmModel> for Model {
    fn from(m: VpSvmModel) -> Self {
        Model::Voronoi(m)
    }
}

impl From<RcSvmModel> for Model {
    fn from(m: RcSvmModel) -> Self {
        Model::Chunks(m)
    }
}

impl Model {
    pub fn method(&self) -> Method {
        match self {
            Model::Voronoi(m) => m.method,
            Model::Chunks(_) => Method::Rc,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::Voronoi(m) => m.dim(),
            Model::Chunks(m) => m.dim(),
        }
    }

    pub fn num_working_sets(&self) -> usize {
        match self {
            Model::Voronoi(m) => m.num_cells(),
            Model::Chunks(m) => m.chunk_models.len(),
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            Model::Voronoi(m) => m.predict(x),
            Model::Chunks(m) => m.predict(x),
        }
    }

    /// Clipped predictions for every sample of `data`, in order.
    pub fn predict_batch(&self, data: &Dataset, workers: Workers) -> Result<Vec<f64>> {
        if data.dim() != self.dim() && !data.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: data.dim(),
            });
        }
        Ok(workers.install(|| par_map(data.samples(), |_, s| self.predict(&s.features))))
    }

    pub fn save<W: Write>(&self, w: W) -> Result<()> {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            dim: self.dim(),
            model: self.clone(),
        };
        serde_json::to_writer(w, &file)?;
        Ok(())
    }

    pub fn load<R: Read>(r: R) -> Result<Self> {
        let file: ModelFile = serde_json::from_reader(r)?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(Error::config(format!(
                "unsupported model file {} v{}",
                file.format, file.version
            )));
        }
        Ok(file.model)
    }

    pub fn save_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.save(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::load(BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Sample;

    fn wave(n: usize) -> Dataset {
        let samples = (0..n)
            .map(|i| {
                let x = -1.0 + 2.0 * ((i * 7919) % n) as f64 / n as f64;
                Sample::new(vec![x], (3.0 * x).sin() * 0.8)
            })
            .collect();
        Dataset::new(samples, 1).unwrap()
    }

    fn small_cfg() -> TrainConfig {
        TrainConfig {
            grid: GridConfig { size: 4 },
            ..TrainConfig::default()
        }
        .with_workers(1)
    }

    #[test]
    fn chunk_sizes_are_balanced() {
        let sizes: Vec<usize> = random_chunks(10, 3, 1).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 3, 3]);
        let mut all: Vec<usize> = random_chunks(10, 3, 1).concat();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn report_statistics() {
        let r = TrainReport::new(Method::Vp, 0.0, Workers::new(1), vec![5, 1, 9, 3], Vec::new());
        assert_eq!((r.ws_min, r.ws_median, r.ws_max, r.num_working_sets), (1, 3, 9, 4));
    }

    #[test]
    fn singleton_cells() {
        let data = wave(12);
        let (model, report) = train_vp_svm(&data, 1e-6, &small_cfg()).unwrap();
        assert_eq!(model.num_cells(), 12);
        assert!(model.cell_models.iter().all(|m| m.len() == 1));
        assert_eq!(report.ws_max, 1);
    }

    #[test]
    fn global_is_one_cell() {
        let data = wave(30);
        let (model, report) = train_global(&data, &small_cfg()).unwrap();
        assert_eq!(model.num_cells(), 1);
        assert_eq!(report.cell_sizes, vec![30]);
        assert_eq!(model.method, Method::Global);
    }

    #[test]
    fn rc_average_of_opposite_chunks_is_zero() {
        let plus = CellModel {
            support_inputs: vec![vec![0.0]],
            alpha: vec![1.0],
            gamma: 1.0,
            lambda_tilde: 0.1,
            clip_bound: 1.0,
        };
        let minus = CellModel {
            alpha: vec![-1.0],
            ..plus.clone()
        };
        let rc = RcSvmModel {
            chunk_models: vec![plus, minus],
            selection: vec![None, None],
            clip_bound: 1.0,
            clip_chunks: true,
        };
        assert_eq!(rc.predict(&[0.0]), 0.0);
    }

    #[test]
    fn rc_rejects_bad_chunk_counts() {
        let data = wave(5);
        assert!(train_rc_svm(&data, 0, &small_cfg(), 1).is_err());
        assert!(train_rc_svm(&data, 6, &small_cfg(), 1).is_err());
    }

    #[test]
    fn empty_training_set() {
        let data = Dataset::empty(1);
        assert!(train_vp_svm(&data, 0.5, &small_cfg()).is_err());
        assert!(train_global(&data, &small_cfg()).is_err());
    }

    #[test]
    fn model_file_roundtrip() {
        let data = wave(40);
        let (model, _) = train_vp_svm(&data, 0.5, &small_cfg()).unwrap();
        let model = Model::from(model);
        let mut buf = Vec::new();
        model.save(&mut buf).unwrap();
        let back = Model::load(buf.as_slice()).unwrap();
        assert_eq!(back, model);
        let bad = String::from_utf8(buf).unwrap().replace("locsvm-model", "other");
        assert!(Model::load(bad.as_bytes()).is_err());
    }

    #[test]
    fn theory_schedule_must_match_data() {
        let data = wave(10);
        let sched = TheorySchedule::new(3.0, 1.0, 1, 11);
        assert!(train_theory_mode(&data, &sched, &small_cfg()).is_err());
    }
}

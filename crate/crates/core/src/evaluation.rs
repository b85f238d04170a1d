//! Risk metrics and benchmark tables.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{generate_synthetic, split_train_test, DataType, Dataset, LabeledTruth, SyntheticSpec};
use crate::estimators::{
    train_global, train_rc_svm, train_theory_mode, train_tv_vp_svm, train_vp_svm, Method, Model,
    TrainConfig, TrainReport,
};
use crate::parallel::{par_map, Workers};
use crate::rng::{derive_seed, purpose};
use crate::selection::{TheorySchedule, TvConfig};
use crate::{Error, Result};

/// Mean squared error of `f` over `test`. Pass a clipping predictor to get
/// the test error as reported everywhere else in this crate.
pub fn empirical_risk<F>(f: F, test: &Dataset) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    if test.is_empty() {
        return Err(Error::EmptyInput("risk of an empty test set"));
    }
    let errs = par_map(test.samples(), |_, s| (s.label - f(&s.features)).powi(2));
    Ok(errs.iter().sum::<f64>() / test.len() as f64)
}

/// Risk restricted to cell `j`: squared errors of the points with
/// `cell_mask[i] == j`, divided by the full test size, so that the
/// restricted risks of all cells sum to [`empirical_risk`].
pub fn restricted_risk<F>(f: F, test: &Dataset, cell_mask: &[usize], j: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if cell_mask.len() != test.len() {
        return Err(Error::DimensionMismatch {
            expected: test.len(),
            got: cell_mask.len(),
        });
    }
    if test.is_empty() {
        return Ok(0.0);
    }
    let sse: f64 = test
        .samples()
        .iter()
        .zip(cell_mask)
        .filter(|(_, &c)| c == j)
        .map(|(s, _)| (s.label - f(&s.features)).powi(2))
        .sum();
    Ok(sse / test.len() as f64)
}

/// Root mean squared distance between `f` and the regression function.
pub fn l2_error<F>(f: F, truth: &[LabeledTruth]) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    if truth.is_empty() {
        return Err(Error::MissingTruth("no ground-truth points".into()));
    }
    let errs = par_map(truth, |_, t| (f(&t.sample.features) - t.bayes_value).powi(2));
    Ok((errs.iter().sum::<f64>() / truth.len() as f64).sqrt())
}

/// One evaluated training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub data_set: String,
    pub method: Method,
    pub setting: String,
    pub n_train: usize,
    pub n_test: usize,
    pub test_error: f64,
    pub l2_error: Option<f64>,
    pub bayes_risk: Option<f64>,
    pub train_seconds: f64,
    pub test_seconds: f64,
    pub working_sets: usize,
    pub ws_median: usize,
    pub ws_min: usize,
    pub ws_max: usize,
    pub seed: u64,
    pub workers: usize,
}

/// Predicts `test` with `model` and fills a report. `truth`, when given,
/// must be index-aligned with `test`.
pub fn evaluate_model(
    model: &Model,
    test: &Dataset,
    truth: Option<&[LabeledTruth]>,
    train: &TrainReport,
    workers: Workers,
) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::EmptyInput("test set is empty"));
    }
    if let Some(t) = truth {
        if t.len() != test.len() {
            return Err(Error::DimensionMismatch {
                expected: test.len(),
                got: t.len(),
            });
        }
    }
    let start = Instant::now();
    let predictions = model.predict_batch(test, workers)?;
    let test_seconds = start.elapsed().as_secs_f64();
    let test_error = test
        .samples()
        .iter()
        .zip(&predictions)
        .map(|(s, p)| (s.label - p).powi(2))
        .sum::<f64>()
        / test.len() as f64;
    let l2 = truth.map(|t| {
        let sq: f64 = t.iter().zip(&predictions).map(|(t, p)| (p - t.bayes_value).powi(2)).sum();
        (sq / t.len() as f64).sqrt()
    });
    let bayes = truth.map(crate::data::estimate_bayes_risk).transpose()?;
    Ok(EvalReport {
        data_set: String::new(),
        method: model.method(),
        setting: String::new(),
        n_train: train.cell_sizes.iter().sum(),
        n_test: test.len(),
        test_error,
        l2_error: l2,
        bayes_risk: bayes,
        train_seconds: train.train_seconds,
        test_seconds,
        working_sets: train.num_working_sets,
        ws_median: train.ws_median,
        ws_min: train.ws_min,
        ws_max: train.ws_max,
        seed: 0,
        workers: workers.get(),
    })
}

/// A line of the CSV report. Per-run rows have `runs = 1` and zero spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub data_set: String,
    pub n_train: usize,
    pub n_test: usize,
    pub method: String,
    pub radius_or_chunks: String,
    pub runs: usize,
    pub train_s: f64,
    pub test_s: f64,
    pub test_err_mean: f64,
    pub test_err_std: f64,
    pub l2_mean: Option<f64>,
    pub l2_std: Option<f64>,
    pub num_ws: f64,
    pub ws_median: f64,
    pub ws_min: f64,
    pub ws_max: f64,
    pub seed: u64,
    pub workers: usize,
    /// Mean training time divided by that of the global LS-SVM at the same
    /// training size, when the benchmark included one.
    pub train_time_vs_global: Option<f64>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl ReportRow {
    pub fn from_run(r: &EvalReport) -> Self {
        ReportRow {
            data_set: r.data_set.clone(),
            n_train: r.n_train,
            n_test: r.n_test,
            method: r.method.to_string(),
            radius_or_chunks: r.setting.clone(),
            runs: 1,
            train_s: r.train_seconds,
            test_s: r.test_seconds,
            test_err_mean: r.test_error,
            test_err_std: 0.0,
            l2_mean: r.l2_error,
            l2_std: r.l2_error.map(|_| 0.0),
            num_ws: r.working_sets as f64,
            ws_median: r.ws_median as f64,
            ws_min: r.ws_min as f64,
            ws_max: r.ws_max as f64,
            seed: r.seed,
            workers: r.workers,
            train_time_vs_global: None,
        }
    }

    /// Means and sample standard deviations over runs of one setting.
    pub fn aggregate(runs: &[EvalReport], seed: u64) -> Result<Self> {
        let first = runs.first().ok_or(Error::EmptyInput("no runs to aggregate"))?;
        let col = |f: &dyn Fn(&EvalReport) -> f64| runs.iter().map(f).collect::<Vec<_>>();
        let (err_m, err_s) = mean_std(&col(&|r| r.test_error));
        let l2: Option<Vec<f64>> = runs.iter().map(|r| r.l2_error).collect();
        let l2 = l2.map(|v| mean_std(&v));
        Ok(ReportRow {
            data_set: first.data_set.clone(),
            n_train: first.n_train,
            n_test: first.n_test,
            method: first.method.to_string(),
            radius_or_chunks: first.setting.clone(),
            runs: runs.len(),
            train_s: mean_std(&col(&|r| r.train_seconds)).0,
            test_s: mean_std(&col(&|r| r.test_seconds)).0,
            test_err_mean: err_m,
            test_err_std: err_s,
            l2_mean: l2.map(|p| p.0),
            l2_std: l2.map(|p| p.1),
            num_ws: mean_std(&col(&|r| r.working_sets as f64)).0,
            ws_median: mean_std(&col(&|r| r.ws_median as f64)).0,
            ws_min: mean_std(&col(&|r| r.ws_min as f64)).0,
            ws_max: mean_std(&col(&|r| r.ws_max as f64)).0,
            seed,
            workers: first.workers,
            train_time_vs_global: None,
        })
    }
}

pub fn write_report_csv<W: Write>(rows: &[ReportRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_report_csv<R: std::io::Read>(r: R) -> Result<Vec<ReportRow>> {
    let rows = csv::Reader::from_reader(r)
        .deserialize()
        .collect::<std::result::Result<Vec<ReportRow>, _>>()?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    Vp { radius: f64 },
    Rc { chunks: usize },
    Global,
    Tv { radius: f64, config: TvConfig },
    Theory { beta: f64, alpha: f64, c1: f64, c2: f64, c3: f64 },
}

impl MethodSpec {
    pub fn method(&self) -> Method {
        match self {
            MethodSpec::Vp { .. } => Method::Vp,
            MethodSpec::Rc { .. } => Method::Rc,
            MethodSpec::Global => Method::Global,
            MethodSpec::Tv { .. } => Method::Tv,
            MethodSpec::Theory { .. } => Method::Theory,
        }
    }

    /// The value of the `radius_or_chunks` column.
    pub fn setting(&self) -> String {
        match self {
            MethodSpec::Vp { radius } | MethodSpec::Tv { radius, .. } => format!("r={radius}"),
            MethodSpec::Rc { chunks } => format!("chunks={chunks}"),
            MethodSpec::Global => "single".into(),
            MethodSpec::Theory { beta, alpha, .. } => format!("beta={beta};alpha={alpha}"),
        }
    }

    /// Trains on `train` with CV and chunk seeds taken from `seed`.
    pub fn train(&self, train: &Dataset, cfg: &TrainConfig, seed: u64) -> Result<(Model, TrainReport)> {
        let cfg = cfg.with_seed(seed);
        Ok(match self {
            MethodSpec::Vp { radius } => {
                let (m, r) = train_vp_svm(train, *radius, &cfg)?;
                (m.into(), r)
            }
            MethodSpec::Rc { chunks } => {
                let (m, r) = train_rc_svm(train, *chunks, &cfg, seed)?;
                (m.into(), r)
            }
            MethodSpec::Global => {
                let (m, r) = train_global(train, &cfg)?;
                (m.into(), r)
            }
            MethodSpec::Tv { radius, config } => {
                let (m, r) = train_tv_vp_svm(train, *radius, config, &cfg)?;
                (m.into(), r)
            }
            MethodSpec::Theory { beta, alpha, c1, c2, c3 } => {
                let sched = TheorySchedule {
                    beta: *beta,
                    alpha: *alpha,
                    c1: *c1,
                    c2: *c2,
                    c3: *c3,
                    dim: train.dim(),
                    n: train.len(),
                };
                let (m, r) = train_theory_mode(train, &sched, &cfg)?;
                (m.into(), r)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Synthetic(DataType),
    /// An already scaled dataset, split anew for every repetition.
    Labeled { name: String, data: Dataset },
}

impl DataSource {
    fn name(&self) -> String {
        match self {
            DataSource::Synthetic(t) => format!("type-{t}"),
            DataSource::Labeled { name, .. } => name.clone(),
        }
    }

    /// Train set, test set and (for synthetic data) test ground truth.
    pub fn draw(&self, n_train: usize, n_test: usize, seed: u64) -> Result<(Dataset, Dataset, Option<Vec<LabeledTruth>>)> {
        match self {
            DataSource::Synthetic(ty) => {
                let d = generate_synthetic(&SyntheticSpec {
                    data_type: *ty,
                    n_train,
                    n_test,
                    seed,
                });
                Ok((d.train_dataset(), d.test_dataset(), Some(d.test)))
            }
            DataSource::Labeled { data, .. } => {
                let (train, test) = split_train_test(data, n_train, n_test, seed)?;
                Ok((train, test, None))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub data: DataSource,
    pub methods: Vec<MethodSpec>,
    pub sizes: Vec<usize>,
    pub n_test: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub train: TrainConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub runs: Vec<EvalReport>,
    /// One row per (method, size), in the order of `methods` then `sizes`.
    pub aggregates: Vec<ReportRow>,
}

impl BenchmarkResult {
    /// `(n_train, mean test error, mean L2 error)` of one method, by size.
    pub fn learning_curve(&self, method: Method) -> Vec<(usize, f64, Option<f64>)> {
        let name = method.to_string();
        self.aggregates
            .iter()
            .filter(|r| r.method == name)
            .map(|r| (r.n_train, r.test_err_mean, r.l2_mean))
            .collect()
    }

    pub fn rows(&self) -> Vec<ReportRow> {
        self.runs.iter().map(ReportRow::from_run).chain(self.aggregates.iter().cloned()).collect()
    }
}

/// Seed of repetition `rep` under the base seed.
pub fn repetition_seed(seed: u64, rep: usize) -> u64 {
    derive_seed(seed, &[purpose::REPETITION, rep as u64])
}

/// Runs every method on every size `repetitions` times. Repetition `k` uses
/// the same data for all methods. Repetitions run one after another so that
/// the reported training times are not distorted by each other.
pub fn benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkResult> {
    if spec.repetitions == 0 || spec.sizes.is_empty() || spec.methods.is_empty() {
        return Err(Error::config("benchmark needs methods, sizes and at least one repetition"));
    }
    let mut runs = Vec::new();
    let mut aggregates = Vec::new();
    let mut global_time = std::collections::HashMap::new();

    for method in &spec.methods {
        for &size in &spec.sizes {
            let mut group = Vec::with_capacity(spec.repetitions);
            for rep in 0..spec.repetitions {
                let seed = repetition_seed(spec.seed, rep);
                let (train, test, truth) = spec.data.draw(size, spec.n_test, seed)?;
                let (model, report) = method.train(&train, &spec.train, seed)?;
                let mut eval = evaluate_model(&model, &test, truth.as_deref(), &report, spec.train.workers)?;
                eval.data_set = spec.data.name();
                eval.setting = method.setting();
                eval.seed = seed;
                group.push(eval);
            }
            let agg = ReportRow::aggregate(&group, spec.seed)?;
            if matches!(method, MethodSpec::Global) {
                global_time.insert(size, agg.train_s);
            }
            aggregates.push(agg);
            runs.extend(group);
        }
    }
    for row in &mut aggregates {
        if let Some(g) = global_time.get(&row.n_train) {
            row.train_time_vs_global = Some(row.train_s / g);
        }
    }
    Ok(BenchmarkResult { runs, aggregates })
}

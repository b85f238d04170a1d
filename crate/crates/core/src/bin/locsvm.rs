#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use locsvm::data::{
    estimate_bayes_risk, generate_synthetic, read_libsvm_file, read_truth_csv, write_libsvm_file,
    write_truth_csv, DataType, SyntheticSpec,
};
use locsvm::estimators::Method;
use locsvm::evaluation::{
    benchmark, evaluate_model, write_report_csv, BenchmarkSpec, DataSource, MethodSpec, ReportRow,
};
use locsvm::partition::{voronoi_partition, CoverInit};
use locsvm::selection::{write_trace_csv, CvConfig, GridConfig, TvConfig};
use locsvm::{Error, Result, TrainConfig, TrainReport};

#[derive(Parser)]
#[command(name = "locsvm", version, about = "Localized least-squares SVMs on Voronoi partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic train/test pair with ground truth.
    Generate(GenerateArgs),
    /// Compute the farthest-first cover and Voronoi cells of a data file.
    Partition(PartitionArgs),
    /// Train a model and write it as JSON.
    Train(TrainArgs),
    /// Score a saved model on a test file.
    Evaluate(EvaluateArgs),
    /// Repeated train/test runs over training sizes.
    Benchmark(BenchmarkArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// I, II, III, IV or V.
    #[arg(long = "type")]
    data_type: DataType,
    #[arg(long, default_value_t = 10_000)]
    n_train: usize,
    #[arg(long, default_value_t = 10_000)]
    n_test: usize,
    #[arg(long, env = "LOCSVM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Prefix of the four output file names; defaults to `type<T>_`.
    #[arg(long)]
    prefix: Option<String>,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    radius: f64,
    /// Start the cover at a seeded random point instead of the first one.
    #[arg(long)]
    random_init: bool,
    #[arg(long, env = "LOCSVM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    cover_out: Option<PathBuf>,
    /// Point-to-cell assignment; stdout if omitted.
    #[arg(long)]
    cells_out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long, value_parser = parse_method, default_value = "vp")]
    method: Method,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    chunks: Option<usize>,
    #[arg(long, default_value_t = 10)]
    grid_size: usize,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, env = "LOCSVM_SEED", default_value_t = 0)]
    seed: u64,
    /// Defaults to the number of available cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 3.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    c1: f64,
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
    #[arg(long, default_value_t = 1.0)]
    c3: f64,
    /// Clipping bound M.
    #[arg(long, default_value_t = 1.0)]
    clip: f64,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model_out: PathBuf,
    /// Report row destination; stdout if omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Hyper-parameter selection trace.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Ground-truth CSV aligned with the test file, enables the L2 error.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// One prediction per line.
    #[arg(long)]
    predictions: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Additional methods run on the same draws, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    also: Vec<Method>,
    /// Synthetic data type; mutually exclusive with --input.
    #[arg(long = "type", conflicts_with = "input")]
    data_type: Option<DataType>,
    /// Scaled LIBSVM file to split repeatedly.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    n_test: usize,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit only `method,n_train,test_err_mean,l2_mean` per size.
    #[arg(long)]
    learning_curve: bool,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl ModelArgs {
    fn train_config(&self) -> Result<TrainConfig> {
        if self.grid_size < 2 || self.folds < 2 {
            return Err(Error::Config("grid size and folds must be at least 2".into()));
        }
        for (name, v) in [("clip", self.clip), ("beta", self.beta), ("alpha", self.alpha)] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("--{name} must be positive")));
            }
        }
        let mut cfg = TrainConfig {
            grid: GridConfig { size: self.grid_size },
            cv: CvConfig { folds: self.folds, seed: self.seed },
            clip_bound: self.clip,
            ..TrainConfig::default()
        };
        if let Some(w) = self.workers {
            if w == 0 {
                return Err(Error::Config("--workers must be positive".into()));
            }
            cfg = cfg.with_workers(w);
        }
        Ok(cfg)
    }

    fn spec(&self, method: Method, strict: bool) -> Result<MethodSpec> {
        let radius = || {
            self.radius
                .filter(|r| *r > 0.0)
                .ok_or_else(|| Error::Config(format!("--method {method} needs a positive --radius")))
        };
        let spec = match method {
            Method::Vp => MethodSpec::Vp { radius: radius()? },
            Method::Tv => MethodSpec::Tv {
                radius: radius()?,
                config: TvConfig::default(),
            },
            Method::Rc => MethodSpec::Rc {
                chunks: self
                    .chunks
                    .filter(|k| *k > 0)
                    .ok_or_else(|| Error::Config("--method rc needs a positive --chunks".into()))?,
            },
            Method::Global => MethodSpec::Global,
            Method::Theory => MethodSpec::Theory {
                beta: self.beta,
                alpha: self.alpha,
                c1: self.c1,
                c2: self.c2,
                c3: self.c3,
            },
        };
        if strict {
            let wants_radius = matches!(method, Method::Vp | Method::Tv);
            if self.radius.is_some() && !wants_radius {
                return Err(Error::Config(format!("--radius does not apply to --method {method}")));
            }
            if self.chunks.is_some() && method != Method::Rc {
                return Err(Error::Config(format!("--chunks does not apply to --method {method}")));
            }
        }
        Ok(spec)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let data = generate_synthetic(&SyntheticSpec {
        data_type: a.data_type,
        n_train: a.n_train,
        n_test: a.n_test,
        seed: a.seed,
    });
    std::fs::create_dir_all(&a.out_dir)?;
    let prefix = a.prefix.clone().unwrap_or_else(|| format!("type{}_", a.data_type));
    let dim = a.data_type.dim();
    let file = |name: &str| a.out_dir.join(format!("{prefix}{name}"));
    write_libsvm_file(&data.train_dataset(), file("train.libsvm"))?;
    write_libsvm_file(&data.test_dataset(), file("test.libsvm"))?;
    write_truth_csv(&data.train, dim, create(&file("train_truth.csv"))?)?;
    write_truth_csv(&data.test, dim, create(&file("test_truth.csv"))?)?;
    if !data.test.is_empty() {
        println!("bayes_risk {}", estimate_bayes_risk(&data.test)?);
    }
    Ok(())
}

fn cmd_partition(a: &PartitionArgs) -> Result<()> {
    let data = read_libsvm_file(&a.input)?;
    let init = if a.random_init { CoverInit::Random(a.seed) } else { CoverInit::First };
    let part = voronoi_partition(&data.inputs(), a.radius, init)?;
    if let Some(p) = &a.cover_out {
        part.cover.write_csv(create(p)?)?;
    }
    part.write_csv(output(a.cells_out.as_deref())?)?;
    log::info!("{} cells, sizes {:?}", part.num_cells(), part.cell_sizes());
    Ok(())
}

#[derive(Serialize)]
struct TrainRow {
    data_set: String,
    n_train: usize,
    method: Method,
    radius_or_chunks: String,
    train_s: f64,
    num_ws: usize,
    ws_median: usize,
    ws_min: usize,
    ws_max: usize,
    seed: u64,
    workers: usize,
}

fn cmd_train(a: &TrainArgs) -> Result<()> {
    let cfg = a.model.train_config()?;
    let spec = a.model.spec(a.model.method, true)?;
    let data = read_libsvm_file(&a.input)?;
    let (model, report): (_, TrainReport) = spec.train(&data, &cfg, a.model.seed)?;
    model.save_file(&a.model_out)?;
    if let Some(p) = &a.trace {
        write_trace_csv(&report.trace, create(p)?)?;
    }
    let row = TrainRow {
        data_set: a.input.display().to_string(),
        n_train: data.len(),
        method: report.method,
        radius_or_chunks: spec.setting(),
        train_s: report.train_seconds,
        num_ws: report.num_working_sets,
        ws_median: report.ws_median,
        ws_min: report.ws_min,
        ws_max: report.ws_max,
        seed: a.model.seed,
        workers: report.workers,
    };
    let mut w = csv::Writer::from_writer(output(a.report.as_deref())?);
    w.serialize(row)?;
    w.flush()?;
    Ok(())
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<()> {
    let model = locsvm::Model::load_file(&a.model)?;
    let test = read_libsvm_file(&a.test)?;
    if test.dim() > model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: test.dim(),
        });
    }
    // LIBSVM files drop trailing zero columns, so pad up to the model dimension.
    let test = pad_to(test, model.dim())?;
    let truth = a.truth.as_ref().map(|p| read_truth_csv(File::open(p)?)).transpose()?;
    let workers = a.workers.map(locsvm::parallel::Workers::new).unwrap_or_default();
    let sizes = working_set_sizes(&model);
    let train = TrainReport::from_sizes(model.method(), 0.0, workers.get(), sizes);
    let mut eval = evaluate_model(&model, &test, truth.as_deref(), &train, workers)?;
    eval.data_set = a.test.display().to_string();
    if let Some(p) = &a.predictions {
        let mut w = create(p)?;
        for y in model.predict_batch(&test, workers)? {
            writeln!(w, "{y}")?;
        }
    }
    write_report_csv(&[ReportRow::from_run(&eval)], output(a.report.as_deref())?)
}

fn pad_to(data: locsvm::data::Dataset, dim: usize) -> Result<locsvm::data::Dataset> {
    if data.dim() == dim {
        return Ok(data);
    }
    let samples = data
        .into_samples()
        .into_iter()
        .map(|mut s| {
            s.features.resize(dim, 0.0);
            s
        })
        .collect();
    locsvm::data::Dataset::new(samples, dim)
}

fn working_set_sizes(model: &locsvm::Model) -> Vec<usize> {
    match model {
        locsvm::Model::Voronoi(m) => m.cell_models.iter().map(|c| c.len()).collect(),
        locsvm::Model::Chunks(m) => m.chunk_models.iter().map(|c| c.len()).collect(),
    }
}

fn cmd_benchmark(a: &BenchmarkArgs) -> Result<()> {
    let train = a.model.train_config()?;
    let mut methods = vec![a.model.spec(a.model.method, false)?];
    for &m in &a.also {
        methods.push(a.model.spec(m, false)?);
    }
    let data = match (&a.data_type, &a.input) {
        (Some(t), None) => DataSource::Synthetic(*t),
        (None, Some(p)) => DataSource::Labeled {
            name: p.display().to_string(),
            data: read_libsvm_file(p)?,
        },
        _ => return Err(Error::Config("give exactly one of --type and --input".into())),
    };
    let result = benchmark(&BenchmarkSpec {
        data,
        methods,
        sizes: a.sizes.clone(),
        n_test: a.n_test,
        repetitions: a.reps,
        seed: a.model.seed,
        train,
    })?;
    let out = output(a.output.as_deref())?;
    if a.learning_curve {
        #[derive(Serialize)]
        struct Point {
            method: String,
            n_train: usize,
            test_err_mean: f64,
            l2_mean: Option<f64>,
        }
        let mut w = csv::Writer::from_writer(out);
        for r in &result.aggregates {
            w.serialize(Point {
                method: r.method.clone(),
                n_train: r.n_train,
                test_err_mean: r.test_err_mean,
                l2_mean: r.l2_mean,
            })?;
        }
        w.flush()?;
        Ok(())
    } else {
        write_report_csv(&result.rows(), out)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Train(a) => cmd_train(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Benchmark(a) => cmd_benchmark(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

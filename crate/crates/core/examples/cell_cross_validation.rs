//! Cross-validation of a single working set over the default grid, with the
//! full selection trace.
//!
//!     cargo run --release --example cell_cross_validation > trace.csv

use locsvm::data::{generate_synthetic, DataType, SyntheticSpec};
use locsvm::selection::{kfold_select, write_trace_csv, CvConfig, GridConfig, TraceRow};

fn main() -> locsvm::Result<()> {
    let data = generate_synthetic(&SyntheticSpec {
        data_type: DataType::V,
        n_train: 300,
        n_test: 0,
        seed: 5,
    })
    .train_dataset();
    let grid = GridConfig::default().for_cell(data.len(), data.dim())?;
    let out = kfold_select(&data.inputs(), &data.labels(), &grid, &CvConfig::default(), data.len(), 1.0)?;
    eprintln!(
        "chose lambda = {:.3e}, gamma = {:.4}, cv risk = {:.5}",
        out.lambda_tilde,
        out.gamma,
        out.risk.unwrap_or(f64::NAN)
    );
    write_trace_csv(&TraceRow::expand(0, &out.scores, false), std::io::stdout().lock())
}

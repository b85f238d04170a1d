use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::Result;

/// Risk of one grid pair: the mean over folds (or the validation risk) and,
/// for cross-validation, the per-fold values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScore {
    pub lambda: f64,
    pub gamma: f64,
    pub risk: f64,
    pub fold_risks: Vec<f64>,
}

/// One CSV line of a selection trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub cell: usize,
    pub lambda: f64,
    pub gamma: f64,
    /// Fold index, `mean` for the fold average, or `validation`.
    pub fold: String,
    pub risk: f64,
}

impl TraceRow {
    pub fn expand(cell: usize, scores: &[GridScore], validation: bool) -> Vec<TraceRow> {
        let mut rows = Vec::new();
        for s in scores {
            for (f, &r) in s.fold_risks.iter().enumerate() {
                rows.push(TraceRow {
                    cell,
                    lambda: s.lambda,
                    gamma: s.gamma,
                    fold: f.to_string(),
                    risk: r,
                });
            }
            rows.push(TraceRow {
                cell,
                lambda: s.lambda,
                gamma: s.gamma,
                fold: if validation { "validation" } else { "mean" }.into(),
                risk: s.risk,
            });
        }
        rows
    }
}

/// Writes `cell,lambda,gamma,fold,risk`.
pub fn write_trace_csv<W: Write>(rows: &[TraceRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

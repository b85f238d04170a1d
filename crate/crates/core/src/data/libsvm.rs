//! LIBSVM text format: one sample per line, `label idx:value idx:value ...`
//! with strictly increasing 1-based indices. Missing indices are zeros.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Dataset, Sample};
use crate::{Error, Result};

/// Reads a LIBSVM stream into a dense dataset. The dimension is the largest
/// index seen anywhere in the input; empty lines are skipped.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<Dataset> {
    let mut sparse: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
    let mut dim = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_ascii_whitespace();
        let label_tok = tokens.next().expect("nonempty line has a token");
        let label: f64 = label_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("non-numeric label {label_tok:?}"),
        })?;

        let mut entries = Vec::new();
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("expected idx:value, found {tok:?}"),
            })?;
            let idx: usize = idx.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("non-numeric index {idx:?}"),
            })?;
            let val: f64 = val.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("non-numeric value {val:?}"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "indices are 1-based".into(),
                });
            }
            if idx <= last {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("index {idx} does not increase (previous {last})"),
                });
            }
            last = idx;
            entries.push((idx, val));
        }
        dim = dim.max(last);
        sparse.push((label, entries));
    }

    let samples = sparse
        .into_iter()
        .map(|(label, entries)| {
            let mut features = vec![0.0; dim];
            for (idx, val) in entries {
                features[idx - 1] = val;
            }
            Sample::new(features, label)
        })
        .collect();
    Dataset::new(samples, dim)
}

pub fn read_libsvm_file(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_libsvm(BufReader::new(File::open(path)?))
}

/// Writes nonzero entries only. If no sample has a nonzero in the last
/// column, an explicit `d:0` is written on the first line so the dimension
/// survives a round trip.
pub fn write_libsvm<W: Write>(data: &Dataset, mut w: W) -> Result<()> {
    let dim = data.dim();
    let last_seen = data
        .samples()
        .iter()
        .any(|s| dim > 0 && s.features[dim - 1] != 0.0);
    for (i, s) in data.samples().iter().enumerate() {
        write!(w, "{}", s.label)?;
        for (j, &v) in s.features.iter().enumerate() {
            if v != 0.0 || (i == 0 && !last_seen && j + 1 == dim) {
                write!(w, " {}:{}", j + 1, v)?;
            }
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_libsvm_file(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_libsvm(data, BufWriter::new(File::create(path)?))
}

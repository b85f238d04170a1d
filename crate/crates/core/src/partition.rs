//! Farthest-first covers and the Voronoi partitions they induce.
//!
//! Distances are Euclidean. All ties (farthest point during construction,
//! nearest center during assignment) resolve to the smallest index.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::parallel::par_map;
use crate::rng::{self, purpose};
use crate::{Error, Result};

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// Centers `z_1..z_m` (each a building point) and the radius `r` such that
/// every building point lies in some ball `B_r(z_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub centers: Vec<Vec<f64>>,
    pub radius: f64,
}

/// Choice of the first center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoverInit {
    #[default]
    First,
    Random(u64),
}

impl Cover {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.centers.first().map_or(0, Vec::len)
    }

    /// Nearest center of `x`, smallest index on ties.
    pub fn cell_of(&self, x: &[f64]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (j, z) in self.centers.iter().enumerate() {
            let d = sq_dist(x, z);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        best
    }

    /// CSV with columns `center, c1..cd, radius`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["center".to_string()];
        header.extend((1..=self.dim()).map(|i| format!("c{i}")));
        header.push("radius".into());
        out.write_record(&header)?;
        for (j, z) in self.centers.iter().enumerate() {
            let mut rec = vec![j.to_string()];
            rec.extend(z.iter().map(|v| v.to_string()));
            rec.push(self.radius.to_string());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Greedy farthest-first traversal: starting from one point, keep adding
/// the point farthest from the current centers while that distance exceeds
/// `r`.
pub fn farthest_first_cover<P: AsRef<[f64]>>(points: &[P], r: f64, init: CoverInit) -> Result<Cover> {
    if points.is_empty() {
        return Err(Error::EmptyInput("cannot cover an empty point set"));
    }
    if !(r > 0.0) {
        return Err(Error::config(format!("cover radius must be positive, got {r}")));
    }
    let dim = points[0].as_ref().len();
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: p.as_ref().len(),
        });
    }

    let first = match init {
        CoverInit::First => 0,
        CoverInit::Random(seed) => rng::rng_for(seed, &[purpose::COVER_INIT]).random_range(0..points.len()),
    };
    let mut centers = vec![points[first].as_ref().to_vec()];
    let mut min_dist: Vec<f64> = points.iter().map(|p| dist(p.as_ref(), &centers[0])).collect();

    loop {
        let (far, far_d) = min_dist
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bd), (i, &d)| if d > bd { (i, d) } else { (bi, bd) });
        if far_d <= r {
            break;
        }
        let z = points[far].as_ref().to_vec();
        for (m, p) in min_dist.iter_mut().zip(points) {
            let d = dist(p.as_ref(), &z);
            if d < *m {
                *m = d;
            }
        }
        centers.push(z);
    }
    Ok(Cover { centers, radius: r })
}

/// Cell membership of a fixed point set under a cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiPartition {
    pub cover: Cover,
    /// Cell index of every point.
    pub assignment: Vec<usize>,
    /// Point indices of each cell, ascending.
    pub cells: Vec<Vec<usize>>,
}

impl VoronoiPartition {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// CSV with columns `point, cell`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["point", "cell"])?;
        for (i, j) in self.assignment.iter().enumerate() {
            out.write_record([i.to_string(), j.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn assign_voronoi<P: AsRef<[f64]> + Sync>(points: &[P], cover: &Cover) -> Result<VoronoiPartition> {
    let dim = cover.dim();
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: p.as_ref().len(),
        });
    }
    let assignment = par_map(points, |_, p| cover.cell_of(p.as_ref()));
    let mut cells = vec![Vec::new(); cover.len()];
    for (i, &j) in assignment.iter().enumerate() {
        cells[j].push(i);
    }
    Ok(VoronoiPartition {
        cover: cover.clone(),
        assignment,
        cells,
    })
}

/// Convenience: cover and partition the same points.
pub fn voronoi_partition<P: AsRef<[f64]> + Sync>(points: &[P], r: f64, init: CoverInit) -> Result<VoronoiPartition> {
    let cover = farthest_first_cover(points, r, init)?;
    assign_voronoi(points, &cover)
}

/// Largest pairwise distance.
pub fn diameter<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(sq_dist(a.as_ref(), b.as_ref()));
        }
    }
    best.sqrt()
}

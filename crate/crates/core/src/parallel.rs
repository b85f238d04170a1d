//! Bounded worker pools.
//!
//! Work items (cells, chunks, repetitions, prediction batches) are mapped in
//! parallel and collected in index order, so the number of workers never
//! changes a result.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Workers(usize);

impl Workers {
    pub fn new(n: usize) -> Self {
        Workers(n.max(1))
    }

    pub fn available() -> Self {
        Workers(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Runs `op` inside a pool with exactly this many threads.
    pub fn install<R: Send>(self, op: impl FnOnce() -> R + Send) -> R {
        match rayon::ThreadPoolBuilder::new().num_threads(self.0).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::available()
    }
}

/// Order-preserving parallel map. Falls back to a plain loop when the
/// caller is not inside a multi-threaded pool.
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    if rayon::current_num_threads() <= 1 || items.len() <= 1 {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    } else {
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

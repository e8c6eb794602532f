//! Chunked Monte Carlo execution with worker-count-independent results.
//!
//! A batch of `total` samples is cut into fixed-size chunks; chunk `i` draws
//! from `RngStream::new(seed, i)` and chunk results are returned in chunk
//! order. The number of worker threads only changes how chunks are
//! scheduled, never which stream feeds which sample.

use rayon::prelude::*;

use crate::error::Result;
use crate::sampling::{derive_seed, RngStream};

pub const CHUNK_SIZE: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonteCarlo {
    pub seed: u64,
    pub workers: usize,
}

impl MonteCarlo {
    pub fn new(seed: u64, workers: usize) -> Self {
        MonteCarlo {
            seed,
            workers: workers.max(1),
        }
    }

    pub fn sequential(seed: u64) -> Self {
        MonteCarlo::new(seed, 1)
    }

    /// A runner whose streams are unrelated to those of any other label.
    pub fn labelled(&self, label: &str) -> Self {
        MonteCarlo {
            seed: derive_seed(self.seed, label),
            workers: self.workers,
        }
    }

    /// Runs `f(stream, chunk_len)` once per chunk; results in chunk order.
    pub fn map_chunks<T, F>(&self, total: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&mut RngStream, usize) -> T + Sync + Send,
    {
        let chunks = total.div_ceil(CHUNK_SIZE);
        let len = |i: usize| CHUNK_SIZE.min(total - i * CHUNK_SIZE);
        let run = |i: usize| f(&mut RngStream::new(self.seed, i as u64), len(i));
        if self.workers == 1 || chunks <= 1 {
            return (0..chunks).map(run).collect();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(|| (0..chunks).into_par_iter().map(run).collect()),
            Err(_) => (0..chunks).map(run).collect(),
        }
    }

    /// `total` independent draws of `sample`, in a fixed order.
    pub fn try_collect<T, F>(&self, total: usize, sample: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&mut RngStream) -> Result<T> + Sync + Send,
    {
        let chunks = self.map_chunks(total, |rng, len| {
            (0..len).map(|_| sample(rng)).collect::<Result<Vec<T>>>()
        });
        let mut out = Vec::with_capacity(total);
        for chunk in chunks {
            out.extend(chunk?);
        }
        Ok(out)
    }

    /// Number of draws for which `event` returns true.
    pub fn try_count<F>(&self, total: usize, event: F) -> Result<u64>
    where
        F: Fn(&mut RngStream) -> Result<bool> + Sync + Send,
    {
        let chunks = self.map_chunks(total, |rng, len| {
            let mut hits = 0u64;
            for _ in 0..len {
                hits += u64::from(event(rng)?);
            }
            Ok(hits)
        });
        chunks.into_iter().sum()
    }
}

//! Random Schreier graphs of `S_n` acting on `[n]_k` and their largest
//! nontrivial eigenvalue, compared with `2√(2r-1)`.
//!
//! Floating point is confined to this module.

pub mod dense;
pub mod lanczos;
pub mod schreier;
pub mod tuples;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::sampling::random_tuple;

pub use dense::{dense_extremes, dense_spectrum};
pub use lanczos::{spectral_gap, LanczosOptions, SpectralReport};
pub use schreier::SchreierGraph;
pub use tuples::TupleSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("need 1 ≤ k ≤ n, got n = {n}, k = {k}")]
    BadTupleSpace { n: usize, k: usize },
    #[error("not a tuple of distinct in-range elements: {0:?}")]
    BadTuple(Vec<usize>),
    #[error("rank {index} is outside [0, {size})")]
    RankOutOfRange { index: usize, size: usize },
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("generator acts on {got} points, expected {n}")]
    DegreeMismatch { n: usize, got: usize },
    #[error("graph needs {needed} stored images, over the budget of {limit}")]
    MemoryBudget { needed: usize, limit: usize },
    #[error("graph has {components} components; analyse each component separately")]
    Disconnected { components: usize },
    #[error("dense oracle limited to {limit} vertices, got {size}")]
    DenseTooLarge { size: usize, limit: usize },
}

/// `2√(2r-1)`.
pub fn alon_boppana(r: usize) -> f64 {
    2.0 * ((2 * r) as f64 - 1.0).sqrt()
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub seeds: Vec<u64>,
    pub lanczos: LanczosOptions,
    /// Redraws allowed when a sampled graph is disconnected.
    pub max_attempts: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub lambda_nontrivial: Option<f64>,
    pub bound: f64,
    pub iterations: usize,
    pub connected: bool,
    pub residual: f64,
    pub converged: bool,
    /// Draws used; draw `a` reads random stream `a` of the seed.
    pub attempts: u64,
}

/// One pinned run: draw generators from `(seed, attempt)` until connected.
pub fn run_seed(config: &ExperimentConfig, seed: u64) -> Result<ExperimentRow, SpectraError> {
    let mut row = ExperimentRow {
        seed,
        n: config.n,
        k: config.k,
        r: config.r,
        lambda_nontrivial: None,
        bound: alon_boppana(config.r),
        iterations: 0,
        connected: false,
        residual: f64::NAN,
        converged: false,
        attempts: 0,
    };
    for attempt in 0..config.max_attempts.max(1) {
        row.attempts = attempt + 1;
        let perms = random_tuple(config.n, config.r, seed, attempt);
        let g = SchreierGraph::new(config.n, config.k, &perms)?;
        if !g.is_connected() {
            continue;
        }
        let report = spectral_gap(&g, &LanczosOptions { seed, ..config.lanczos.clone() })?;
        row.lambda_nontrivial = report.lambda_nontrivial;
        row.iterations = report.iterations;
        row.connected = true;
        row.residual = report.residual;
        row.converged = report.converged;
        break;
    }
    Ok(row)
}

pub fn spectral_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>, SpectraError> {
    config.seeds.par_iter().map(|&s| run_seed(config, s)).collect()
}

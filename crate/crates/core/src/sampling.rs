//! Independent statistical oracles: uniform permutations, word maps, and
//! Monte Carlo and exhaustive estimates of `E_w[χ^{λ+(n)}]`.
//!
//! Randomness is counter based. Sample `s` of a run with seed `seed` reads
//! ChaCha8 stream `s`, so results do not depend on how samples are split
//! across workers.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::Word;
use crate::symmetric::{character, factorial, CycleType, ShapeError, YoungDiagram};

/// Cap on `(n!)^r` for exhaustive averaging.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000_000;

/// Samples per accumulator chunk; fixed so the merge order is fixed.
const CHUNK: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplingError {
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("word of rank {rank} needs {rank} permutations, got {got}")]
    RankMismatch { rank: usize, got: usize },
    #[error("permutations act on different sets ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("exhaustive average over (n!)^r = {needed} tuples exceeds {limit}")]
    ScaleGuard { needed: u128, limit: u128 },
    #[error("need at least one sample")]
    NoSamples,
    #[error("n must be positive")]
    EmptySet,
}

/// A bijection of `{0, ..., n-1}`, `i ↦ images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, SamplingError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(SamplingError::NotAPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, x)| i == *x).count()
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::of_permutation(&self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", one_based.join(" "))
    }
}

pub fn cycle_type(p: &Permutation) -> CycleType {
    p.cycle_type()
}

fn stream_rng(seed: u64, position: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(position);
    rng
}

fn shuffle_from(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation { images }
}

/// A uniform permutation of `[n]`, determined by `(seed, position)`.
pub fn random_permutation(n: usize, seed: u64, position: u64) -> Permutation {
    shuffle_from(&mut stream_rng(seed, position), n)
}

/// `r` independent uniform permutations read from one stream.
pub fn random_tuple(n: usize, r: usize, seed: u64, position: u64) -> Vec<Permutation> {
    let mut rng = stream_rng(seed, position);
    (0..r).map(|_| shuffle_from(&mut rng, n)).collect()
}

/// `w(g_1, ..., g_r)` with the rightmost letter applied first, so `ab`
/// maps `i` to `g_1(g_2(i))`.
pub fn evaluate_word(w: &Word, perms: &[Permutation]) -> Result<Permutation, SamplingError> {
    if perms.len() != w.rank() {
        return Err(SamplingError::RankMismatch { rank: w.rank(), got: perms.len() });
    }
    let n = perms.first().map_or(0, Permutation::degree);
    if let Some(p) = perms.iter().find(|p| p.degree() != n) {
        return Err(SamplingError::DegreeMismatch(n, p.degree()));
    }
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let mut images: Vec<usize> = (0..n).collect();
    for letter in w.letters().iter().rev() {
        let g = if letter.inverse { &inverses[letter.generator] } else { &perms[letter.generator] };
        for x in images.iter_mut() {
            *x = g.images[*x];
        }
    }
    Ok(Permutation { images })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Welford accumulator; `merge` is Chan et al.'s pairwise update.
#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Welford { count, mean, m2 }
    }
}

/// Sample mean and standard error of `χ^{λ+(n)}(w(g_1, ..., g_r))`.
pub fn mc_expected_character(
    w: &Word,
    lambda: &YoungDiagram,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<McReport, SamplingError> {
    if samples == 0 {
        return Err(SamplingError::NoSamples);
    }
    let shape = lambda.plus_n(n)?;
    let r = w.rank();
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<Welford> = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Welford, SamplingError> {
            let mut cache: HashMap<CycleType, f64> = HashMap::new();
            let mut acc = Welford::default();
            for s in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let g = evaluate_word(w, &random_tuple(n, r, seed, s))?;
                let ct = g.cycle_type();
                let chi = match cache.get(&ct) {
                    Some(v) => *v,
                    None => {
                        let v = character(&shape, &ct)?.to_f64().unwrap_or(f64::NAN);
                        cache.insert(ct, v);
                        v
                    }
                };
                acc.push(chi);
            }
            Ok(acc)
        })
        .collect::<Result<_, _>>()?;
    let total = partials.into_iter().fold(Welford::default(), Welford::merge);
    let variance = if total.count > 1 { total.m2 / (total.count - 1) as f64 } else { 0.0 };
    Ok(McReport { mean: total.mean, stderr: (variance / total.count as f64).sqrt(), samples, seed })
}

/// Every permutation of `[n]` in lexicographic order.
fn all_perms(n: usize) -> Vec<Permutation> {
    crate::symmetric::all_permutations(n).into_iter().map(|images| Permutation { images }).collect()
}

/// The exact average over all `(n!)^r` generator tuples.
pub fn exhaustive_expected_character(w: &Word, lambda: &YoungDiagram, n: usize) -> Result<BigRational, SamplingError> {
    if n == 0 {
        return Err(SamplingError::EmptySet);
    }
    let r = w.rank();
    let per = factorial(n).to_u128().unwrap_or(u128::MAX);
    let needed = per.checked_pow(r as u32).unwrap_or(u128::MAX);
    if needed > EXHAUSTIVE_LIMIT {
        return Err(SamplingError::ScaleGuard { needed, limit: EXHAUSTIVE_LIMIT });
    }
    let shape = lambda.plus_n(n)?;
    let perms = all_perms(n);
    let size = perms.len();
    // shard on the first generator; each shard walks the rest by odometer
    let total: BigInt = (0..if r == 0 { 1 } else { size })
        .into_par_iter()
        .map(|first| -> Result<BigInt, SamplingError> {
            let mut cache: HashMap<CycleType, BigInt> = HashMap::new();
            let mut sum = BigInt::zero();
            let mut idx = vec![0usize; r];
            if r > 0 {
                idx[0] = first;
            }
            loop {
                let tuple: Vec<Permutation> = idx.iter().map(|&i| perms[i].clone()).collect();
                let ct = evaluate_word(w, &tuple)?.cycle_type();
                if !cache.contains_key(&ct) {
                    let v = character(&shape, &ct)?;
                    cache.insert(ct.clone(), v);
                }
                sum += &cache[&ct];
                let mut f = 1;
                loop {
                    if f >= r {
                        return Ok(sum);
                    }
                    idx[f] += 1;
                    if idx[f] < size {
                        break;
                    }
                    idx[f] = 0;
                    f += 1;
                }
            }
        })
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))?;
    Ok(BigRational::new(total, BigInt::from(needed)))
}

//! Exact expected characters of word-random permutations.
//!
//! For a word `w` in a free group and a Young diagram `λ ⊢ k`, the expected
//! value of the stable character `χ^{λ+(n)}` at `w(σ_1, ..., σ_r)`, with the
//! `σ_i` uniform in `S_n`, is a rational function of `n`. This crate computes
//! it exactly by Weingarten calculus, cross-checks it against exhaustive and
//! Monte Carlo oracles, and measures spectral gaps of random Schreier graphs.

pub mod algebra;
pub mod engine;
pub mod partition;
pub mod regress;
pub mod sampling;
pub mod spectra;
pub mod symmetric;
pub mod weingarten;

//! Thick-restart Lanczos for both ends of the spectrum of a Schreier graph,
//! on the orthogonal complement of its trivial eigenvectors.
//!
//! Every basis vector is projected off the deflation vectors (constants,
//! plus the bipartition sign vector when the graph is bipartite) and fully
//! reorthogonalized. The projected matrix `H = Vᵀ A V` is kept explicitly,
//! so a restart is just a change of basis to the retained Ritz vectors.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{SchreierGraph, SpectraError};

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Residual tolerance relative to the degree: accept when
    /// `‖A y - θ y‖ ≤ tolerance · 2r`.
    pub tolerance: f64,
    /// Cap on matrix-vector products.
    pub max_iterations: usize,
    /// Basis size before a restart.
    pub basis: usize,
    /// Ritz vectors retained at each end on restart.
    pub keep: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tolerance: 1e-8, max_iterations: 500, basis: 64, keep: 12, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub vertices: usize,
    /// `2r`.
    pub degree: usize,
    pub connected: bool,
    pub bipartite: bool,
    /// Largest eigenvalue on the complement of the trivial eigenvectors.
    pub lambda_top: Option<f64>,
    pub lambda_bottom: Option<f64>,
    /// `max(|top|, |bottom|)`; `None` when every eigenvalue is `±2r`.
    pub lambda_nontrivial: Option<f64>,
    pub iterations: usize,
    /// Largest explicit residual `‖A y - θ y‖` over the two reported pairs.
    pub residual: f64,
    pub converged: bool,
    pub seed: u64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(b, a)| *b += alpha * a);
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Normalized deflation vectors for the trivial eigenvalues `2r`, `-2r`.
fn deflation_vectors(g: &SchreierGraph) -> (Vec<Vec<f64>>, bool) {
    let size = g.vertex_count();
    let s = 1.0 / (size as f64).sqrt();
    let mut out = vec![vec![s; size]];
    let bip = g.bipartition();
    if let Some(colour) = &bip {
        out.push(colour.iter().map(|&c| c as f64 * s).collect());
    }
    (out, bip.is_some())
}

fn project_out(vs: &[Vec<f64>], w: &mut [f64]) {
    for v in vs {
        let c = dot(v, w);
        axpy(-c, v, w);
    }
}

/// Extreme nontrivial eigenvalues of a connected Schreier graph.
pub fn spectral_gap(g: &SchreierGraph, options: &LanczosOptions) -> Result<SpectralReport, SpectraError> {
    let components = g.component_count();
    if components != 1 {
        return Err(SpectraError::Disconnected { components });
    }
    let size = g.vertex_count();
    let degree = g.degree();
    let (deflate, bipartite) = deflation_vectors(g);
    let mut report = SpectralReport {
        vertices: size,
        degree,
        connected: true,
        bipartite,
        lambda_top: None,
        lambda_bottom: None,
        lambda_nontrivial: None,
        iterations: 0,
        residual: 0.0,
        converged: true,
        seed: options.seed,
    };
    let effective = size - deflate.len();
    if effective == 0 {
        return Ok(report);
    }
    let m_max = options.basis.max(4).min(effective);
    let keep = options.keep.max(1).min((m_max - 1) / 2).max(1);
    let target = options.tolerance * degree as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut next: Vec<f64> = (0..size).map(|_| rng.random_range(-1.0..1.0)).collect();
    project_out(&deflate, &mut next);
    let nn = norm(&next);
    next.iter_mut().for_each(|x| *x /= nn);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
    let mut h = DMatrix::<f64>::zeros(m_max, m_max);
    let mut coupling: Vec<f64> = Vec::new();
    let mut w = vec![0.0; size];
    loop {
        let j = basis.len();
        for (i, &c) in coupling.iter().enumerate() {
            h[(i, j)] = c;
            h[(j, i)] = c;
        }
        basis.push(std::mem::take(&mut next));
        g.apply(&basis[j], &mut w);
        report.iterations += 1;
        project_out(&deflate, &mut w);
        let mut diag = 0.0;
        // Gram-Schmidt against the whole basis, twice
        for _ in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
                if i == j {
                    diag += c;
                }
            }
        }
        project_out(&deflate, &mut w);
        h[(j, j)] = diag;
        let beta = norm(&w);
        let m = basis.len();
        let exhausted = beta <= 1e-12 * degree as f64 || m == effective;
        let out_of_budget = report.iterations >= options.max_iterations;
        if m < m_max && !exhausted && !out_of_budget {
            next = w.iter().map(|x| x / beta).collect();
            coupling = vec![0.0; m];
            coupling[j] = beta;
            continue;
        }

        let eig = SymmetricEigen::new(h.view((0, 0), (m, m)).into_owned());
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let estimate = |c: usize| if exhausted { 0.0 } else { (beta * eig.eigenvectors[(m - 1, c)]).abs() };
        let (lo, hi) = (order[0], order[m - 1]);
        let done = estimate(lo) <= target && estimate(hi) <= target;
        if done || exhausted || out_of_budget {
            let ritz = |c: usize| {
                let mut y = vec![0.0; size];
                for (i, v) in basis.iter().enumerate() {
                    axpy(eig.eigenvectors[(i, c)], v, &mut y);
                }
                y
            };
            let mut residual: f64 = 0.0;
            for c in [lo, hi] {
                let y = ritz(c);
                g.apply(&y, &mut w);
                axpy(-eig.eigenvalues[c], &y, &mut w);
                residual = residual.max(norm(&w) / norm(&y));
            }
            let (bottom, top) = (eig.eigenvalues[lo], eig.eigenvalues[hi]);
            report.lambda_top = Some(top);
            report.lambda_bottom = Some(bottom);
            report.lambda_nontrivial = Some(top.abs().max(bottom.abs()));
            report.residual = residual;
            report.converged = residual <= target;
            return Ok(report);
        }

        // thick restart on the `keep` Ritz vectors at each end
        let mut kept: Vec<usize> = order[..keep].to_vec();
        kept.extend_from_slice(&order[m - keep..]);
        let new_basis: Vec<Vec<f64>> = kept
            .iter()
            .map(|&c| {
                let mut y = vec![0.0; size];
                for (i, v) in basis.iter().enumerate() {
                    axpy(eig.eigenvectors[(i, c)], v, &mut y);
                }
                y
            })
            .collect();
        h.fill(0.0);
        for (a, &c) in kept.iter().enumerate() {
            h[(a, a)] = eig.eigenvalues[c];
        }
        coupling = kept.iter().map(|&c| beta * eig.eigenvectors[(m - 1, c)]).collect();
        basis = new_basis;
        next = w.iter().map(|x| x / beta).collect();
    }
}

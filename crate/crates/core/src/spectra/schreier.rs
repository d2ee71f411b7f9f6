//! Schreier graphs `Sch(S_n ↷ [n]_k, σ_1, ..., σ_r)` as matrix-free operators.
//!
//! Vertex `x` is joined to `σ_i x` for each `i`; loops and multiple edges are
//! kept, so every vertex has degree exactly `2r` and the adjacency operator
//! is `A = Σ_i (P_i + P_i^{-1})`.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::{SpectraError, TupleSpace};
use crate::partition::UnionFind;
use crate::sampling::Permutation;

/// Default cap on stored image entries (`2 r |V|`).
pub const DEFAULT_MEMORY_ENTRIES: usize = 100_000_000;

const MATVEC_CHUNK: usize = 8192;

#[derive(Clone, Debug)]
pub struct SchreierGraph {
    space: TupleSpace,
    /// `forward[i][v]` is the rank of `σ_i` applied to tuple `v`.
    forward: Vec<Vec<u32>>,
    backward: Vec<Vec<u32>>,
}

impl SchreierGraph {
    pub fn new(n: usize, k: usize, perms: &[Permutation]) -> Result<Self, SpectraError> {
        Self::with_budget(n, k, perms, DEFAULT_MEMORY_ENTRIES)
    }

    pub fn with_budget(n: usize, k: usize, perms: &[Permutation], max_entries: usize) -> Result<Self, SpectraError> {
        let space = TupleSpace::new(n, k)?;
        if perms.is_empty() {
            return Err(SpectraError::NoGenerators);
        }
        if let Some(p) = perms.iter().find(|p| p.degree() != n) {
            return Err(SpectraError::DegreeMismatch { n, got: p.degree() });
        }
        let size = space.size();
        let entries = size.saturating_mul(2 * perms.len());
        if entries > max_entries || size > u32::MAX as usize {
            return Err(SpectraError::MemoryBudget { needed: entries, limit: max_entries });
        }
        let mut forward = Vec::with_capacity(perms.len());
        let mut backward = Vec::with_capacity(perms.len());
        let mut tuple = vec![0; k];
        for p in perms {
            let mut fwd = vec![0u32; size];
            let mut bwd = vec![0u32; size];
            for v in 0..size {
                space.unrank_into(v, &mut tuple);
                for x in tuple.iter_mut() {
                    *x = p.apply(*x);
                }
                let u = space.rank_unchecked(&tuple);
                fwd[v] = u as u32;
                bwd[u] = v as u32;
            }
            forward.push(fwd);
            backward.push(bwd);
        }
        Ok(SchreierGraph { space, forward, backward })
    }

    pub fn space(&self) -> TupleSpace {
        self.space
    }

    pub fn vertex_count(&self) -> usize {
        self.space.size()
    }

    /// `r`.
    pub fn generator_count(&self) -> usize {
        self.forward.len()
    }

    pub fn degree(&self) -> usize {
        2 * self.forward.len()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.vertex_count());
        assert_eq!(y.len(), self.vertex_count());
        y.par_chunks_mut(MATVEC_CHUNK).enumerate().for_each(|(c, out)| {
            let base = c * MATVEC_CHUNK;
            for (o, slot) in out.iter_mut().enumerate() {
                let v = base + o;
                let mut acc = 0.0;
                for (f, b) in self.forward.iter().zip(&self.backward) {
                    acc += x[f[v] as usize] + x[b[v] as usize];
                }
                *slot = acc;
            }
        });
    }

    /// Neighbours of `v` with multiplicity.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.forward.iter().zip(&self.backward).flat_map(move |(f, b)| [f[v] as usize, b[v] as usize])
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for f in &self.forward {
            for (v, &u) in f.iter().enumerate() {
                uf.union(v, u as usize);
            }
        }
        (0..self.vertex_count()).filter(|&v| uf.find(v) == v).count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// A proper 2-colouring (`±1`) if the graph is bipartite. Loops make a
    /// graph non-bipartite.
    pub fn bipartition(&self) -> Option<Vec<i8>> {
        let size = self.vertex_count();
        let mut colour = vec![0i8; size];
        let mut queue = VecDeque::new();
        for start in 0..size {
            if colour[start] != 0 {
                continue;
            }
            colour[start] = 1;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbours(v) {
                    if colour[u] == 0 {
                        colour[u] = -colour[v];
                        queue.push_back(u);
                    } else if colour[u] == colour[v] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    /// Dense adjacency matrix, row-major.
    pub fn dense(&self) -> Vec<f64> {
        let size = self.vertex_count();
        let mut a = vec![0.0; size * size];
        for v in 0..size {
            for u in self.neighbours(v) {
                a[v * size + u] += 1.0;
            }
        }
        a
    }
}

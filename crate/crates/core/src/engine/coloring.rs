//! Exact counting of index assignments `N(σ, τ, π)`.
//!
//! An assignment maps each vertex class of `Γ` to `[n]` and must be
//! injective on every distinctness clique, so `N` is the chromatic
//! polynomial of the conflict graph whose edges join classes that share a
//! clique.

use std::collections::HashMap;

use super::{ContributionGraph, EngineError};
use crate::algebra::{falling_factorial, int, Polynomial};

/// Largest conflict graph handled; adjacency rows are `u128` bitmasks.
pub const MAX_CLASSES: usize = 128;

pub type ChromaticMemo = HashMap<Vec<u128>, Polynomial>;

pub fn count_assignments(g: &ContributionGraph) -> Result<Polynomial, EngineError> {
    if g.is_contradictory() {
        return Ok(Polynomial::zero());
    }
    let adj = conflict_graph(g.vertex_count(), &g.class_cliques())?;
    Ok(chromatic_polynomial(&adj, &mut HashMap::new()))
}

/// Adjacency masks of the conflict graph. Cliques must list distinct classes.
pub fn conflict_graph(vertices: usize, cliques: &[Vec<usize>]) -> Result<Vec<u128>, EngineError> {
    if vertices > MAX_CLASSES {
        return Err(EngineError::ScaleGuard {
            what: "conflict graph vertices".into(),
            needed: vertices as u128,
            limit: MAX_CLASSES as u128,
        });
    }
    let mut adj = vec![0u128; vertices];
    for c in cliques {
        for (a, &u) in c.iter().enumerate() {
            for &v in &c[..a] {
                if u != v {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
            }
        }
    }
    Ok(adj)
}

/// The number of proper `n`-colourings as a polynomial in `n`.
pub fn chromatic_polynomial(adj: &[u128], memo: &mut ChromaticMemo) -> Polynomial {
    let v = adj.len();
    if v == 0 {
        return Polynomial::one();
    }
    if let Some(hit) = memo.get(adj) {
        return hit.clone();
    }
    let result = chromatic_uncached(adj, memo);
    memo.insert(adj.to_vec(), result.clone());
    result
}

fn chromatic_uncached(adj: &[u128], memo: &mut ChromaticMemo) -> Polynomial {
    let v = adj.len();
    let full = mask_below(v);

    // split into components
    let comp = component_of(adj, 0);
    if comp != full {
        let a = induced(adj, comp);
        let b = induced(adj, full & !comp);
        return &chromatic_polynomial(&a, memo) * &chromatic_polynomial(&b, memo);
    }

    // a vertex whose neighbourhood is a clique contributes a free factor
    for u in 0..v {
        let nb = adj[u];
        let is_clique = bits(nb).all(|x| nb & !(adj[x] | 1 << x) == 0);
        if is_clique {
            let d = nb.count_ones() as i64;
            let rest = induced(adj, full & !(1 << u));
            return &Polynomial::linear(int(-d), int(1)) * &chromatic_polynomial(&rest, memo);
        }
    }

    let edges: u32 = adj.iter().map(|m| m.count_ones()).sum::<u32>() / 2;
    let possible = (v * (v - 1) / 2) as u32;
    if edges == possible {
        return falling_factorial(v);
    }
    if 2 * edges > possible {
        // addition–contraction on a non-edge: P(G) = P(G + uv) + P(G / uv)
        let (u, w) = first_pair(adj, true);
        let mut added = adj.to_vec();
        added[u] |= 1 << w;
        added[w] |= 1 << u;
        &chromatic_polynomial(&added, memo) + &chromatic_polynomial(&contract(adj, u, w), memo)
    } else {
        // deletion–contraction on an edge: P(G) = P(G - uv) - P(G / uv)
        let (u, w) = first_pair(adj, false);
        let mut deleted = adj.to_vec();
        deleted[u] &= !(1 << w);
        deleted[w] &= !(1 << u);
        &chromatic_polynomial(&deleted, memo) - &chromatic_polynomial(&contract(adj, u, w), memo)
    }
}

fn mask_below(v: usize) -> u128 {
    if v == 128 {
        u128::MAX
    } else {
        (1u128 << v) - 1
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn component_of(adj: &[u128], start: usize) -> u128 {
    let mut seen = 1u128 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for x in bits(frontier) {
            next |= adj[x];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

/// The subgraph on `keep`, relabelled in increasing order.
fn induced(adj: &[u128], keep: u128) -> Vec<u128> {
    let kept: Vec<usize> = bits(keep).collect();
    kept.iter()
        .map(|&x| {
            let row = adj[x] & keep;
            kept.iter().enumerate().filter(|(_, &y)| row >> y & 1 == 1).fold(0u128, |m, (j, _)| m | 1 << j)
        })
        .collect()
}

/// Merges `w` into `u` and drops `w`.
fn contract(adj: &[u128], u: usize, w: usize) -> Vec<u128> {
    let mut merged = adj.to_vec();
    merged[u] = (adj[u] | adj[w]) & !(1 << u) & !(1 << w);
    for x in bits(adj[w]) {
        if x != u {
            merged[x] |= 1 << u;
        }
    }
    induced(&merged, mask_below(adj.len()) & !(1 << w))
}

/// The first edge (or non-edge) in row-major order.
fn first_pair(adj: &[u128], non_edge: bool) -> (usize, usize) {
    let v = adj.len();
    for u in 0..v {
        let candidates = if non_edge { !adj[u] & mask_below(v) } else { adj[u] };
        if let Some(w) = bits(candidates & !mask_below(u + 1)).next() {
            return (u, w);
        }
    }
    unreachable!("caller checked the graph is neither empty nor complete")
}

//! Set partitions of `[m]` in restricted-growth form, the refinement lattice,
//! and the partition families the character engine sums over.
//!
//! Elements are 0-based internally and 1-based in the textual form
//! `{{1,3},{2}}`. A partition of `[rows * k]` lays element `r * k + c` in
//! row `r`, column `c`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

pub const DEFAULT_BUDGET: u128 = 10_000_000;
pub const BUDGET_ENV: &str = "WORDCHAR_BUDGET";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partitions have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("{lower} is not a refinement of {upper}")]
    NotRefinement { lower: String, upper: String },
    #[error("enumerating {what} needs {needed} items, over the budget of {budget}")]
    BudgetExceeded { what: String, needed: u128, budget: u128 },
    #[error("invalid partition: {0}")]
    Invalid(String),
}

/// Cap on the number of objects any single enumeration may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { limit: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(limit: u128) -> Self {
        assert!(limit > 0, "budget must be positive");
        Budget { limit }
    }

    /// `WORDCHAR_BUDGET` if set and parseable, else `fallback`.
    pub fn from_env_or(fallback: u128) -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
            .filter(|&v| v > 0)
            .map(Budget::new)
            .unwrap_or(Budget::new(fallback))
    }

    pub fn limit(&self) -> u128 {
        self.limit
    }

    pub fn check(&self, what: &str, needed: u128) -> Result<(), PartitionError> {
        if needed > self.limit {
            return Err(PartitionError::BudgetExceeded {
                what: what.to_string(),
                needed,
                budget: self.limit,
            });
        }
        Ok(())
    }
}

/// Bell numbers by the Bell triangle; saturates instead of overflowing.
pub fn bell(m: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last.saturating_add(x));
        }
        row = next;
    }
    row[0]
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Canonical labels: components numbered by first appearance.
    pub(crate) fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        canonical_labels(&roots)
    }
}

fn canonical_labels<T: Copy + Eq + std::hash::Hash>(raw: &[T]) -> Vec<usize> {
    let mut seen = std::collections::HashMap::new();
    raw.iter()
        .map(|x| {
            let next = seen.len();
            *seen.entry(*x).or_insert(next)
        })
        .collect()
}

/// A partition of `[m]`, `m ≥ 1`, stored as its restricted-growth string.
///
/// Ordering is lexicographic on the string, which is the enumeration order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Box<[u8]>,
    blocks: u8,
}

impl SetPartition {
    pub const MAX_SIZE: usize = 255;

    pub fn from_rgs(rgs: &[u8]) -> Result<Self, PartitionError> {
        if rgs.is_empty() || rgs.len() > Self::MAX_SIZE {
            return Err(PartitionError::Invalid(format!("size {} out of range", rgs.len())));
        }
        let mut next = 0u8;
        for &b in rgs {
            if b > next {
                return Err(PartitionError::Invalid(format!("{rgs:?} is not restricted-growth")));
            }
            if b == next {
                next += 1;
            }
        }
        Ok(SetPartition { rgs: rgs.into(), blocks: next })
    }

    /// Canonicalizes arbitrary block labels.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Result<Self, PartitionError> {
        let canon: Vec<u8> = canonical_labels(labels).into_iter().map(|x| x as u8).collect();
        Self::from_rgs(&canon)
    }

    /// Builds from 0-based blocks that must cover `[m]` exactly once.
    pub fn from_blocks(m: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut labels = vec![usize::MAX; m];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::Invalid("empty block".into()));
            }
            for &e in block {
                if e >= m || labels[e] != usize::MAX {
                    return Err(PartitionError::Invalid(format!("element {} misplaced", e + 1)));
                }
                labels[e] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(PartitionError::Invalid("blocks do not cover every element".into()));
        }
        Self::from_labels(&labels)
    }

    pub fn singletons(m: usize) -> Self {
        Self::from_rgs(&(0..m).map(|i| i as u8).collect::<Vec<_>>()).expect("valid size")
    }

    pub fn single_block(m: usize) -> Self {
        Self::from_rgs(&vec![0; m]).expect("valid size")
    }

    pub fn size(&self) -> usize {
        self.rgs.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks as usize
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_of(&self, element: usize) -> usize {
        self.rgs[element] as usize
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.rgs[a] == self.rgs[b]
    }

    /// Blocks in order of their smallest element, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(i);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.block_count()];
        for &b in self.rgs.iter() {
            out[b as usize] += 1;
        }
        out
    }

    fn same_size(&self, other: &SetPartition) -> Result<(), PartitionError> {
        if self.size() != other.size() {
            return Err(PartitionError::SizeMismatch { left: self.size(), right: other.size() });
        }
        Ok(())
    }

    /// Greatest common refinement.
    pub fn meet(&self, other: &SetPartition) -> Result<SetPartition, PartitionError> {
        self.same_size(other)?;
        let pairs: Vec<(u8, u8)> = self.rgs.iter().zip(other.rgs.iter()).map(|(&a, &b)| (a, b)).collect();
        Self::from_labels(&pairs)
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition, PartitionError> {
        self.same_size(other)?;
        let m = self.size();
        let mut uf = UnionFind::new(m);
        for part in [self, other] {
            let mut first = vec![usize::MAX; part.block_count()];
            for i in 0..m {
                let b = part.block_of(i);
                if first[b] == usize::MAX {
                    first[b] = i;
                } else {
                    uf.union(first[b], i);
                }
            }
        }
        Self::from_labels(&uf.labels())
    }

    /// True iff every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &SetPartition) -> Result<bool, PartitionError> {
        self.same_size(other)?;
        let mut image = vec![u8::MAX; self.block_count()];
        for (&a, &b) in self.rgs.iter().zip(other.rgs.iter()) {
            let slot = &mut image[a as usize];
            if *slot == u8::MAX {
                *slot = b;
            } else if *slot != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Möbius function `μ(self, upper)` of the refinement lattice, by the
    /// closed product form over the blocks of `upper`.
    pub fn mobius(&self, upper: &SetPartition) -> Result<BigInt, PartitionError> {
        if !self.leq(upper)? {
            return Err(PartitionError::NotRefinement {
                lower: self.to_string(),
                upper: upper.to_string(),
            });
        }
        let mut inside = vec![0usize; upper.block_count()];
        let mut counted = vec![false; self.block_count()];
        for i in 0..self.size() {
            let b = self.block_of(i);
            if !counted[b] {
                counted[b] = true;
                inside[upper.block_of(i)] += 1;
            }
        }
        let mut acc = BigInt::one();
        for b in inside {
            for f in 2..b {
                acc *= f;
            }
        }
        if (self.block_count() - upper.block_count()) % 2 == 1 {
            acc = -acc;
        }
        Ok(acc)
    }

    /// Every partition finer than or equal to `self`, in RGS order.
    pub fn refinements(&self) -> Vec<SetPartition> {
        let blocks = self.blocks();
        let per_block: Vec<Vec<SetPartition>> = blocks
            .iter()
            .map(|b| all_partitions_unchecked(b.len()))
            .collect();
        let mut out = Vec::new();
        let mut labels = vec![0usize; self.size()];
        fn rec(
            idx: usize,
            offset: usize,
            blocks: &[Vec<usize>],
            per_block: &[Vec<SetPartition>],
            labels: &mut Vec<usize>,
            out: &mut Vec<SetPartition>,
        ) {
            if idx == blocks.len() {
                out.push(SetPartition::from_labels(labels).expect("valid labels"));
                return;
            }
            for sub in &per_block[idx] {
                for (pos, &e) in blocks[idx].iter().enumerate() {
                    labels[e] = offset + sub.block_of(pos);
                }
                rec(idx + 1, offset + sub.block_count(), blocks, per_block, labels, out);
            }
        }
        rec(0, 0, &blocks, &per_block, &mut labels, &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (bi, block) in self.blocks().iter().enumerate() {
            if bi > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (ei, e) in block.iter().enumerate() {
                if ei > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", e + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SetPartition {
    type Err = PartitionError;

    /// Parses `{{1,3},{2}}`; the size is the largest element mentioned.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PartitionError::Invalid(format!("cannot parse {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut blocks = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(bad)?;
            let close = body.find('}').ok_or_else(bad)?;
            let block = body[..close]
                .split(',')
                .map(|t| t.parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(bad)?;
            blocks.push(block);
            rest = &body[close + 1..];
            if let Some(after) = rest.strip_prefix(',') {
                if after.is_empty() {
                    return Err(bad());
                }
                rest = after;
            } else if !rest.is_empty() {
                return Err(bad());
            }
        }
        let m = blocks.iter().flatten().map(|&e| e + 1).max().ok_or_else(bad)?;
        Self::from_blocks(m, &blocks)
    }
}

fn all_partitions_unchecked(m: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0u8; m];
    fn rec(i: usize, next: u8, rgs: &mut Vec<u8>, out: &mut Vec<SetPartition>) {
        if i == rgs.len() {
            out.push(SetPartition { rgs: rgs.clone().into(), blocks: next });
            return;
        }
        for b in 0..=next {
            rgs[i] = b;
            rec(i + 1, if b == next { next + 1 } else { next }, rgs, out);
        }
    }
    if m > 0 {
        rec(1, 1, &mut rgs, &mut out);
    }
    out
}

/// Every partition of `[m]` in lexicographic RGS order.
pub fn enumerate_partitions(m: usize, budget: &Budget) -> Result<Vec<SetPartition>, PartitionError> {
    if m == 0 || m > SetPartition::MAX_SIZE {
        return Err(PartitionError::Invalid(format!("size {m} out of range")));
    }
    budget.check(&format!("partitions of [{m}]"), bell(m))?;
    Ok(all_partitions_unchecked(m))
}

/// Partitions of `[rows * k]` with no singleton block and no block holding
/// two elements of one row, in lexicographic RGS order.
pub fn enumerate_star_partitions(
    rows: usize,
    k: usize,
    budget: &Budget,
) -> Result<Vec<SetPartition>, PartitionError> {
    if rows < 2 || k == 0 || rows > 64 || rows * k > SetPartition::MAX_SIZE {
        return Err(PartitionError::Invalid(format!("rows={rows}, k={k} out of range")));
    }
    struct State<'a> {
        rows: usize,
        k: usize,
        rgs: Vec<u8>,
        row_mask: Vec<u64>,
        sizes: Vec<usize>,
        singletons: usize,
        out: Vec<SetPartition>,
        budget: &'a Budget,
    }
    fn rec(st: &mut State, i: usize) -> Result<(), PartitionError> {
        let m = st.rows * st.k;
        if st.singletons > m - i {
            return Ok(());
        }
        if i == m {
            if st.out.len() as u128 >= st.budget.limit() {
                return Err(PartitionError::BudgetExceeded {
                    what: format!("star partitions of {} rows of {}", st.rows, st.k),
                    needed: st.out.len() as u128 + 1,
                    budget: st.budget.limit(),
                });
            }
            let blocks = st.sizes.len() as u8;
            st.out.push(SetPartition { rgs: st.rgs.clone().into(), blocks });
            return Ok(());
        }
        let bit = 1u64 << (i / st.k);
        for b in 0..=st.sizes.len() {
            if b < st.sizes.len() {
                if st.row_mask[b] & bit != 0 {
                    continue;
                }
                st.row_mask[b] |= bit;
                st.sizes[b] += 1;
                if st.sizes[b] == 2 {
                    st.singletons -= 1;
                }
                st.rgs[i] = b as u8;
                rec(st, i + 1)?;
                if st.sizes[b] == 2 {
                    st.singletons += 1;
                }
                st.sizes[b] -= 1;
                st.row_mask[b] &= !bit;
            } else {
                st.row_mask.push(bit);
                st.sizes.push(1);
                st.singletons += 1;
                st.rgs[i] = b as u8;
                rec(st, i + 1)?;
                st.singletons -= 1;
                st.sizes.pop();
                st.row_mask.pop();
            }
        }
        Ok(())
    }
    let mut st = State {
        rows,
        k,
        rgs: vec![0; rows * k],
        row_mask: Vec::new(),
        sizes: Vec::new(),
        singletons: 0,
        out: Vec::new(),
        budget,
    };
    rec(&mut st, 0)?;
    Ok(st.out)
}

/// A partial matching between the top row `0..k` and bottom row `k..2k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PartialMatching {
    k: usize,
    /// `bottom[i]` is the column of the bottom element paired with top `i`.
    bottom: Vec<Option<usize>>,
}

impl PartialMatching {
    /// `pairs` are `(top column, bottom column)`, both in `0..k`.
    pub fn new(k: usize, pairs: &[(usize, usize)]) -> Result<Self, PartitionError> {
        let mut bottom = vec![None; k];
        let mut used = vec![false; k];
        for &(t, b) in pairs {
            if t >= k || b >= k || bottom[t].is_some() || used[b] {
                return Err(PartitionError::Invalid(format!("pair ({t},{b}) is not a matching edge")));
            }
            bottom[t] = Some(b);
            used[b] = true;
        }
        Ok(PartialMatching { k, bottom })
    }

    pub fn empty(k: usize) -> Self {
        PartialMatching { k, bottom: vec![None; k] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Pairs `(top column, bottom column)` ordered by top column.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.bottom
            .iter()
            .enumerate()
            .filter_map(|(t, b)| b.map(|b| (t, b)))
            .collect()
    }

    pub fn pair_count(&self) -> usize {
        self.bottom.iter().flatten().count()
    }

    /// Number of pairs missing from a perfect matching.
    pub fn del(&self) -> usize {
        self.k - self.pair_count()
    }

    /// Block count of the matching as a partition of `[2k]`.
    pub fn block_count(&self) -> usize {
        2 * self.k - self.pair_count()
    }

    pub fn bottom_of(&self, top: usize) -> Option<usize> {
        self.bottom[top]
    }

    pub fn to_partition(&self) -> SetPartition {
        let mut labels: Vec<usize> = (0..2 * self.k).collect();
        for (t, b) in self.pairs() {
            labels[self.k + b] = t;
        }
        SetPartition::from_labels(&labels).expect("valid matching")
    }

    pub fn from_partition(p: &SetPartition) -> Result<Self, PartitionError> {
        if !p.size().is_multiple_of(2) {
            return Err(PartitionError::Invalid(format!("{p} has odd size")));
        }
        let k = p.size() / 2;
        let mut pairs = Vec::new();
        for block in p.blocks() {
            match block.as_slice() {
                [_] => {}
                [t, b] if *t < k && *b >= k => pairs.push((*t, *b - k)),
                _ => return Err(PartitionError::Invalid(format!("{p} is not a partial matching"))),
            }
        }
        Self::new(k, &pairs)
    }
}

impl fmt::Display for PartialMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_partition(), f)
    }
}

/// Number of partial matchings of `k` against `k`: `Σ_m C(k,m)² m!`.
pub fn submatching_count(k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    let mut fact = 1u128;
    for m in 0..=k {
        if m > 0 {
            binom = binom * (k - m + 1) as u128 / m as u128;
            fact *= m as u128;
        }
        total += binom * binom * fact;
    }
    total
}

/// All partial matchings of `[2k]`, each top element choosing "unmatched"
/// first and then bottom columns in increasing order.
pub fn enumerate_submatchings(k: usize, budget: &Budget) -> Result<Vec<PartialMatching>, PartitionError> {
    if k == 0 || 2 * k > SetPartition::MAX_SIZE {
        return Err(PartitionError::Invalid(format!("k={k} out of range")));
    }
    budget.check(&format!("partial matchings with k={k}"), submatching_count(k))?;
    let mut out = Vec::new();
    let mut cur = PartialMatching::empty(k);
    let mut used = vec![false; k];
    fn rec(t: usize, cur: &mut PartialMatching, used: &mut [bool], out: &mut Vec<PartialMatching>) {
        if t == cur.k {
            out.push(cur.clone());
            return;
        }
        rec(t + 1, cur, used, out);
        for b in 0..cur.k {
            if !used[b] {
                used[b] = true;
                cur.bottom[t] = Some(b);
                rec(t + 1, cur, used, out);
                cur.bottom[t] = None;
                used[b] = false;
            }
        }
    }
    rec(0, &mut cur, &mut used, &mut out);
    Ok(out)
}

/// `ι(σ)`: top `i` paired with bottom `σ⁻¹(i)`. `sigma[j]` is the image of `j`.
pub fn iota(sigma: &[usize]) -> PartialMatching {
    let k = sigma.len();
    let mut bottom = vec![None; k];
    for (j, &i) in sigma.iter().enumerate() {
        bottom[i] = Some(j);
    }
    PartialMatching { k, bottom }
}

/// Every `τ ∈ S_k` with `ι(τ) ≥ m`, as image vectors, in lexicographic order.
pub fn completions(m: &PartialMatching) -> Vec<Vec<usize>> {
    let k = m.k;
    let mut tau = vec![usize::MAX; k];
    let mut top_used = vec![false; k];
    for (t, b) in m.pairs() {
        tau[b] = t;
        top_used[t] = true;
    }
    let mut out = Vec::new();
    fn rec(j: usize, tau: &mut Vec<usize>, top_used: &mut [bool], fixed: &[bool], out: &mut Vec<Vec<usize>>) {
        if j == tau.len() {
            out.push(tau.clone());
            return;
        }
        if fixed[j] {
            rec(j + 1, tau, top_used, fixed, out);
            return;
        }
        for i in 0..tau.len() {
            if !top_used[i] {
                top_used[i] = true;
                tau[j] = i;
                rec(j + 1, tau, top_used, fixed, out);
                top_used[i] = false;
            }
        }
    }
    let fixed: Vec<bool> = tau.iter().map(|&t| t != usize::MAX).collect();
    rec(0, &mut tau, &mut top_used, &fixed, &mut out);
    out
}

/// Stacks `p` above `q`, identifying the bottom row of `p` with the top row
/// of `q`. Returns the outer partition and the number of components that
/// live entirely in the identified middle row, so `p·q = n^γ · result`.
pub fn multiply_diagrams(p: &SetPartition, q: &SetPartition) -> Result<(SetPartition, usize), PartitionError> {
    p.same_size(q)?;
    if !p.size().is_multiple_of(2) {
        return Err(PartitionError::Invalid(format!("{p} is not a diagram on [2k]")));
    }
    let k = p.size() / 2;
    let mut uf = UnionFind::new(3 * k);
    for (part, shift) in [(p, 0usize), (q, k)] {
        let mut first = vec![usize::MAX; part.block_count()];
        for i in 0..2 * k {
            let b = part.block_of(i);
            if first[b] == usize::MAX {
                first[b] = i + shift;
            } else {
                uf.union(first[b], i + shift);
            }
        }
    }
    let roots: Vec<usize> = (0..3 * k).map(|v| uf.find(v)).collect();
    let outer: Vec<usize> = roots[..k].iter().chain(roots[2 * k..].iter()).copied().collect();
    let mut middle_only: Vec<usize> = roots[k..2 * k]
        .iter()
        .copied()
        .filter(|r| !outer.contains(r))
        .collect();
    middle_only.sort_unstable();
    middle_only.dedup();
    Ok((SetPartition::from_labels(&outer)?, middle_only.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn all(m: usize) -> Vec<SetPartition> {
        enumerate_partitions(m, &Budget::default()).unwrap()
    }

    fn mobius_recursive(p: &SetPartition, q: &SetPartition) -> BigInt {
        if p == q {
            return BigInt::one();
        }
        let mut acc = BigInt::from(0);
        for r in all(p.size()) {
            if r != *q && p.leq(&r).unwrap() && r.leq(q).unwrap() {
                acc -= mobius_recursive(p, &r);
            }
        }
        acc
    }

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        fn heap(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if n <= 1 {
                out.push(cur.clone());
                return;
            }
            for i in 0..n {
                heap(n - 1, cur, out);
                let j = if n % 2 == 0 { i } else { 0 };
                cur.swap(j, n - 1);
            }
        }
        heap(k, &mut cur, &mut out);
        out.sort();
        out
    }

    #[test]
    fn bell_counts_and_order() {
        assert_eq!(all(1), vec![sp("{{1}}")]);
        assert_eq!(all(3).len(), 5);
        assert_eq!(all(4).len(), 15);
        let five = all(5);
        assert_eq!(five.len() as u128, bell(5));
        assert!(five.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(bell(12), 4_213_597);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_partitions(13, &Budget::default()),
            Err(PartitionError::BudgetExceeded { .. })
        ));
        assert!(enumerate_partitions(4, &Budget::new(14)).is_err());
        assert!(enumerate_star_partitions(3, 2, &Budget::new(3)).is_err());
        assert!(enumerate_submatchings(3, &Budget::new(33)).is_err());
    }

    #[test]
    fn meet_join_leq_examples() {
        let p = sp("{{1,2},{3}}");
        assert_eq!(p.meet(&p).unwrap(), p);
        assert_eq!(p.meet(&sp("{{1,3},{2}}")).unwrap(), SetPartition::singletons(3));
        assert_eq!(sp("{{1,2,3}}").meet(&p).unwrap(), p);
        assert_eq!(p.join(&sp("{{2,3},{1}}")).unwrap(), sp("{{1,2,3}}"));
        assert!(SetPartition::singletons(3).leq(&p).unwrap());
        assert!(!p.leq(&sp("{{1,3},{2}}")).unwrap());
        assert!(p.meet(&SetPartition::singletons(4)).is_err());
    }

    #[test]
    fn mobius_examples() {
        let s3 = SetPartition::singletons(3);
        assert_eq!(s3.mobius(&s3).unwrap(), BigInt::one());
        assert_eq!(s3.mobius(&SetPartition::single_block(3)).unwrap(), BigInt::from(2));
        assert_eq!(
            SetPartition::singletons(2).mobius(&SetPartition::single_block(2)).unwrap(),
            BigInt::from(-1)
        );
        assert!(matches!(
            sp("{{1,2},{3}}").mobius(&sp("{{1,3},{2}}")),
            Err(PartitionError::NotRefinement { .. })
        ));
    }

    #[test]
    fn mobius_matches_recursive_definition() {
        for m in 1..=4 {
            let ps = all(m);
            for p in &ps {
                for q in &ps {
                    if p.leq(q).unwrap() {
                        assert_eq!(p.mobius(q).unwrap(), mobius_recursive(p, q), "{p} {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn mobius_sums_vanish_up_to_five() {
        for m in 1..=5 {
            let ps = all(m);
            for p in &ps {
                for q in &ps {
                    if !p.leq(q).unwrap() {
                        continue;
                    }
                    let mut acc = BigInt::from(0);
                    for r in &ps {
                        if p.leq(r).unwrap() && r.leq(q).unwrap() {
                            acc += p.mobius(r).unwrap();
                        }
                    }
                    assert_eq!(acc, BigInt::from((p == q) as i32));
                }
            }
        }
    }

    #[test]
    fn lattice_laws_on_four() {
        let ps = all(4);
        for a in &ps {
            assert_eq!(a.meet(a).unwrap(), *a);
            assert_eq!(a.join(a).unwrap(), *a);
            for b in &ps {
                let ab = a.meet(b).unwrap();
                assert_eq!(ab, b.meet(a).unwrap());
                assert_eq!(a.join(b).unwrap(), b.join(a).unwrap());
                assert_eq!(a.meet(&a.join(b).unwrap()).unwrap(), *a);
                assert_eq!(a.join(&ab).unwrap(), *a);
                assert_eq!(a.leq(b).unwrap(), ab == *a);
                for c in &ps {
                    assert_eq!(ab.meet(c).unwrap(), a.meet(&b.meet(c).unwrap()).unwrap());
                    assert_eq!(
                        a.join(b).unwrap().join(c).unwrap(),
                        a.join(&b.join(c).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn star_partition_examples() {
        let b = Budget::default();
        assert_eq!(enumerate_star_partitions(2, 1, &b).unwrap(), vec![sp("{{1,2}}")]);
        assert_eq!(enumerate_star_partitions(2, 2, &b).unwrap().len(), 2);
        assert_eq!(enumerate_star_partitions(3, 1, &b).unwrap(), vec![sp("{{1,2,3}}")]);
        assert!(enumerate_star_partitions(1, 3, &b).is_err());
    }

    #[test]
    fn star_partitions_are_the_filter() {
        for (rows, k) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (5, 1), (6, 1)] {
            let expected: Vec<_> = all(rows * k)
                .into_iter()
                .filter(|p| {
                    p.blocks().iter().all(|bl| {
                        bl.len() >= 2 && {
                            let mut r: Vec<_> = bl.iter().map(|e| e / k).collect();
                            r.dedup();
                            r.len() == bl.len()
                        }
                    })
                })
                .collect();
            assert_eq!(enumerate_star_partitions(rows, k, &Budget::default()).unwrap(), expected);
        }
    }

    #[test]
    fn submatching_counts() {
        let b = Budget::default();
        assert_eq!(enumerate_submatchings(1, &b).unwrap().len(), 2);
        assert_eq!(enumerate_submatchings(2, &b).unwrap().len(), 7);
        assert_eq!(enumerate_submatchings(3, &b).unwrap().len(), 34);
        assert_eq!(submatching_count(4), 209);
    }

    #[test]
    fn submatchings_are_refinements_of_permutation_pairings() {
        for k in 1..=3 {
            let perms: Vec<SetPartition> = permutations(k).iter().map(|s| iota(s).to_partition()).collect();
            let mut expected: Vec<SetPartition> = all(2 * k)
                .into_iter()
                .filter(|p| perms.iter().any(|q| p.leq(q).unwrap()))
                .collect();
            let mut got: Vec<SetPartition> = enumerate_submatchings(k, &Budget::default())
                .unwrap()
                .iter()
                .map(PartialMatching::to_partition)
                .collect();
            expected.sort();
            got.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn completion_examples() {
        let full = PartialMatching::new(2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(completions(&full), vec![vec![0, 1]]);
        assert_eq!(completions(&PartialMatching::empty(2)).len(), 2);
        let one = PartialMatching::new(3, &[(2, 0)]).unwrap();
        let c = completions(&one);
        assert_eq!(c.len(), 2);
        for tau in &c {
            assert!(one.to_partition().leq(&iota(tau).to_partition()).unwrap());
        }
    }

    #[test]
    fn completions_match_exhaustive_filter() {
        for k in 1..=3 {
            for m in enumerate_submatchings(k, &Budget::default()).unwrap() {
                let expected: Vec<_> = permutations(k)
                    .into_iter()
                    .filter(|t| m.to_partition().leq(&iota(t).to_partition()).unwrap())
                    .collect();
                assert_eq!(completions(&m), expected);
                assert_eq!(PartialMatching::from_partition(&m.to_partition()).unwrap(), m);
            }
        }
    }

    #[test]
    fn diagram_examples() {
        let id = iota(&[0, 1, 2]).to_partition();
        assert_eq!(multiply_diagrams(&id, &id).unwrap(), (id.clone(), 0));
        let s = SetPartition::singletons(2);
        assert_eq!(multiply_diagrams(&s, &s).unwrap(), (s.clone(), 1));
        let perms = permutations(3);
        for a in &perms {
            for b in &perms {
                let ab: Vec<usize> = (0..3).map(|j| a[b[j]]).collect();
                let (prod, gamma) =
                    multiply_diagrams(&iota(a).to_partition(), &iota(b).to_partition()).unwrap();
                assert_eq!(gamma, 0);
                assert_eq!(prod, iota(&ab).to_partition());
            }
        }
    }

    #[test]
    fn diagram_multiplication_is_associative() {
        for k in 1..=2 {
            let ps = all(2 * k);
            for a in &ps {
                for b in &ps {
                    let (ab, g1) = multiply_diagrams(a, b).unwrap();
                    for c in &ps {
                        let (abc, g2) = multiply_diagrams(&ab, c).unwrap();
                        let (bc, h1) = multiply_diagrams(b, c).unwrap();
                        let (abc2, h2) = multiply_diagrams(a, &bc).unwrap();
                        assert_eq!((abc, g1 + g2), (abc2, h1 + h2));
                    }
                }
            }
        }
    }

    #[test]
    fn refinements_are_the_down_set() {
        for q in all(4) {
            let expected: Vec<_> = all(4).into_iter().filter(|p| p.leq(&q).unwrap()).collect();
            assert_eq!(q.refinements(), expected);
        }
    }

    #[test]
    fn text_form_round_trips() {
        let p = sp("{{1,3},{2}}");
        assert_eq!(p.rgs(), &[0, 1, 0]);
        assert_eq!(p.to_string(), "{{1,3},{2}}");
        assert_eq!(sp("{ {2}, {3,1} }"), p);
        for bad in ["", "{}", "{{1},{1}}", "{{1,3}}", "{{1},}", "{{0}}", "{{1}"] {
            assert!(bad.parse::<SetPartition>().is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn labels_canonicalize(labels in proptest::collection::vec(0u8..6, 1..10)) {
            let p = SetPartition::from_labels(&labels).unwrap();
            let q: SetPartition = p.to_string().parse().unwrap();
            prop_assert_eq!(&p, &q);
            for i in 0..labels.len() {
                for j in 0..labels.len() {
                    prop_assert_eq!(p.same_block(i, j), labels[i] == labels[j]);
                }
            }
        }

        #[test]
        fn meet_is_greatest_lower_bound(
            a in proptest::collection::vec(0u8..4, 6),
            b in proptest::collection::vec(0u8..4, 6),
        ) {
            let (a, b) = (SetPartition::from_labels(&a).unwrap(), SetPartition::from_labels(&b).unwrap());
            let m = a.meet(&b).unwrap();
            let j = a.join(&b).unwrap();
            prop_assert!(m.leq(&a).unwrap() && m.leq(&b).unwrap());
            prop_assert!(a.leq(&j).unwrap() && b.leq(&j).unwrap());
            for r in all(6) {
                if r.leq(&a).unwrap() && r.leq(&b).unwrap() {
                    prop_assert!(r.leq(&m).unwrap());
                }
            }
        }
    }
}

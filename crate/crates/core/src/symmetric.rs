//! Young diagrams, characters of `S_k` by Murnaghan–Nakayama, hook-length
//! dimensions and the stable dimension of `λ+(n)` as a polynomial in `n`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{falling_factorial, int, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("parts {0:?} are not a weakly decreasing sequence of positive integers")]
    NotAPartition(Vec<usize>),
    #[error("cannot parse shape {0:?}")]
    Parse(String),
    #[error("shape of size {diagram} against a cycle type of size {cycle}")]
    SizeMismatch { diagram: usize, cycle: usize },
    #[error("n = {n} is too small to prepend a first row to {lambda}")]
    TooSmall { lambda: String, n: usize },
}

fn validate(parts: &[usize]) -> Result<(), ShapeError> {
    if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(ShapeError::NotAPartition(parts.to_vec()));
    }
    Ok(())
}

fn parse_parts(s: &str) -> Result<Vec<usize>, ShapeError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| ShapeError::Parse(s.to_string())))
        .collect()
}

fn write_parts(parts: &[usize], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

/// A Young diagram `λ ⊢ k`, rows listed longest first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(parts: Vec<usize>) -> Result<Self, ShapeError> {
        validate(&parts)?;
        Ok(YoungDiagram { parts })
    }

    pub fn empty() -> Self {
        YoungDiagram { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `k = |λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn first_row(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> YoungDiagram {
        let cols = self.first_row();
        let parts = (0..cols)
            .map(|c| self.parts.iter().take_while(|&&p| p > c).count())
            .collect();
        YoungDiagram { parts }
    }

    /// Hook lengths row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                out.push(len - c + conj.parts[c] - r - 1);
            }
        }
        out
    }

    /// `λ+(n) = (n - k, λ_1, λ_2, ...)`; needs `n - k ≥ λ_1`.
    pub fn plus_n(&self, n: usize) -> Result<YoungDiagram, ShapeError> {
        let k = self.size();
        if n < k + self.first_row() {
            return Err(ShapeError::TooSmall { lambda: self.to_string(), n });
        }
        let mut parts = Vec::with_capacity(self.parts.len() + 1);
        if n > k {
            parts.push(n - k);
        }
        parts.extend_from_slice(&self.parts);
        Ok(YoungDiagram { parts })
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(&self.parts, f)
    }
}

impl fmt::Debug for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for YoungDiagram {
    type Err = ShapeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_parts(s)?)
    }
}

impl Serialize for YoungDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for YoungDiagram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Cycle lengths of a permutation, longest first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(parts: Vec<usize>) -> Result<Self, ShapeError> {
        validate(&parts)?;
        Ok(CycleType { parts })
    }

    /// Sorts arbitrary positive cycle lengths into canonical order.
    pub fn from_lengths(mut lengths: Vec<usize>) -> Result<Self, ShapeError> {
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(lengths)
    }

    pub fn identity(n: usize) -> Self {
        CycleType { parts: vec![1; n] }
    }

    /// Cycle type of the permutation `i ↦ images[i]`.
    pub fn of_permutation(images: &[usize]) -> Self {
        let mut seen = vec![false; images.len()];
        let mut lengths = Vec::new();
        for start in 0..images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = images[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts: lengths }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Size of the conjugacy class, `n! / ∏ i^{m_i} m_i!`.
    pub fn class_size(&self) -> BigInt {
        let mut denom = BigInt::one();
        let mut i = 0;
        while i < self.parts.len() {
            let len = self.parts[i];
            let mult = self.parts[i..].iter().take_while(|&&p| p == len).count();
            for j in 1..=mult {
                denom *= BigInt::from(len) * j;
            }
            i += mult;
        }
        factorial(self.degree()) / denom
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(&self.parts, f)
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for CycleType {
    type Err = ShapeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_parts(s)?)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Advances `perm` to its lexicographic successor; false at the last one.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).expect("successor exists");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// All of `S_n` as image vectors, lexicographically.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Every `λ ⊢ k` in decreasing lexicographic order, `(k)` first.
pub fn partitions_of(k: usize) -> Vec<YoungDiagram> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if left == 0 {
            out.push(YoungDiagram { parts: cur.clone() });
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    rec(k, k, &mut cur, &mut out);
    out
}

/// `χ^λ` on the class `ct`.
///
/// Murnaghan–Nakayama on beta-sets: removing a border strip of length `r` is
/// moving one bead from `b` to the free position `b - r`, with sign
/// `(-1)^(beads strictly between)`.
pub fn character(lambda: &YoungDiagram, ct: &CycleType) -> Result<BigInt, ShapeError> {
    if lambda.size() != ct.degree() {
        return Err(ShapeError::SizeMismatch { diagram: lambda.size(), cycle: ct.degree() });
    }
    let rows = lambda.parts.len();
    let beads: Vec<usize> = lambda
        .parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + rows - 1 - i)
        .collect();
    let mut memo = HashMap::new();
    Ok(mn(beads, &ct.parts, 0, &mut memo))
}

fn mn(
    beads: Vec<usize>,
    cycles: &[usize],
    idx: usize,
    memo: &mut HashMap<(Vec<usize>, usize), BigInt>,
) -> BigInt {
    if idx == cycles.len() {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&(beads.clone(), idx)) {
        return v.clone();
    }
    let r = cycles[idx];
    let mut acc = BigInt::zero();
    for (pos, &b) in beads.iter().enumerate() {
        if b < r || beads.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let passed = beads.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beads.clone();
        next[pos] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let v = mn(next, cycles, idx + 1, memo);
        if passed % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    memo.insert((beads, idx), acc.clone());
    acc
}

/// `k! / ∏ hooks`.
pub fn dim(lambda: &YoungDiagram) -> BigInt {
    let hooks = lambda.hooks().iter().fold(BigInt::one(), |acc, &h| acc * h);
    factorial(lambda.size()) / hooks
}

/// The polynomial `p` with `p(n) = dim λ+(n)` for all `n ≥ k + λ_1`.
pub fn dim_stable(lambda: &YoungDiagram) -> Polynomial {
    let k = lambda.size();
    let start = k + lambda.first_row();
    let points: Vec<(BigRational, BigRational)> = (start..=start + k)
        .map(|n| {
            let d = dim(&lambda.plus_n(n).expect("n is large enough"));
            (int(n as i64), BigRational::from_integer(d))
        })
        .collect();
    let p = Polynomial::interpolate(&points);
    debug_assert_eq!(p.degree(), Some(k));
    debug_assert_eq!(
        p.leading_coefficient().cloned(),
        Some(BigRational::new(dim(lambda), factorial(k)))
    );
    p
}

/// `(n)_λ = ∏_{j=1}^{k} (n - k + 1 + λ̌_j - j)`, with `λ̌_j = 0` past the
/// first row. Satisfies `dim_stable(λ) · (n)_λ = d_λ / k! · (n)_{2k}`.
pub fn falling_product_lambda(lambda: &YoungDiagram) -> Polynomial {
    let k = lambda.size() as i64;
    let conj = lambda.conjugate();
    let mut acc = Polynomial::one();
    for j in 1..=k {
        let col = conj.parts.get(j as usize - 1).copied().unwrap_or(0) as i64;
        acc = &acc * &Polynomial::linear(int(-k + 1 + col - j), BigRational::one());
    }
    acc
}

/// `(n)_{2k} · d_λ / k!`, the right-hand side of the identity above.
pub fn stable_dimension_identity_rhs(lambda: &YoungDiagram) -> Polynomial {
    let k = lambda.size();
    falling_factorial(2 * k).scale(&BigRational::new(dim(lambda), factorial(k)))
}

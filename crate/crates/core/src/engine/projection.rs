//! The orthogonal projection `Q_{λ,n}` of `(C^n)^{⊗k}` onto the copy of
//! `V^{λ+(n)} ⊗ V^λ`, written as `Σ_π c(n,k,λ,π) p_π` over partial matchings.
//!
//! `p_π` uses the iff rule: `⟨p_π e_A, e_B⟩ = 1` iff positions `u, v` of
//! `A ⊔ B` carry equal entries exactly when `u ∼ v` in `π`. So each pair
//! `(A, B)` meets at most one `π`, its own equality pattern.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::EngineError;
use crate::algebra::{falling_factorial, falling_from, int, Polynomial, RationalFunction};
use crate::partition::{completions, PartialMatching, SetPartition};
use crate::symmetric::{all_permutations, character, dim, dim_stable, factorial, partitions_of, CycleType, YoungDiagram};

/// Largest `n^k` the dense oracle accepts.
pub const DENSE_LIMIT: u128 = 10_000;

/// `Σ_{τ : ι(τ) ≥ π} χ^λ(τ)`.
pub fn character_sum(lambda: &YoungDiagram, pi: &PartialMatching) -> Result<BigInt, EngineError> {
    let mut acc = BigInt::zero();
    for tau in completions(pi) {
        acc += character(lambda, &CycleType::of_permutation(&tau))?;
    }
    Ok(acc)
}

/// `h(π) = (-1)^{|π|+k} S(π) (n-|π|)(n-|π|-1)...(n-2k+1)`, an integer
/// polynomial with `c(n,k,λ,π) = dim_stable(λ) · h(π) / (n)_{2k}`.
pub fn projection_weight(lambda: &YoungDiagram, pi: &PartialMatching) -> Result<Polynomial, EngineError> {
    let k = pi.k();
    let blocks = pi.block_count();
    let mut s = character_sum(lambda, pi)?;
    if (blocks + k) % 2 == 1 {
        s = -s;
    }
    Ok(falling_from(blocks as i64, 2 * k - blocks).scale(&BigRational::from_integer(s)))
}

/// `c(n,k,λ,π) = d_{λ+(n)} (-1)^{|π|+k} / (n)_{|π|} · Σ_{ι(τ) ≥ π} χ^λ(τ)`.
pub fn proj_coeff(lambda: &YoungDiagram, pi: &PartialMatching) -> Result<RationalFunction, EngineError> {
    if lambda.size() != pi.k() {
        return Err(EngineError::Malformed(format!(
            "diagram of size {} against a matching with k = {}",
            lambda.size(),
            pi.k()
        )));
    }
    let num = &dim_stable(lambda) * &projection_weight(lambda, pi)?;
    Ok(RationalFunction::new(num, falling_factorial(2 * pi.k()))?)
}

fn check_dense(k: usize, n: usize) -> Result<usize, EngineError> {
    if n < 2 * k {
        return Err(EngineError::Malformed(format!("dense projection needs n ≥ 2k, got n = {n}, k = {k}")));
    }
    let size = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > DENSE_LIMIT {
        return Err(EngineError::ScaleGuard { what: format!("dense (C^{n})^⊗{k}"), needed: size, limit: DENSE_LIMIT });
    }
    Ok(size as usize)
}

/// `Q_{λ,n}` as a dense exact matrix on `(C^n)^{⊗k}`. Basis vectors are
/// indexed base `n` with the first tensor position most significant.
#[derive(Clone, Debug)]
pub struct ProjectionMatrix {
    n: usize,
    k: usize,
    dim: usize,
    lambda: YoungDiagram,
    entries: Vec<BigRational>,
}

impl ProjectionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.dim + col]
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        decode(index, self.n, self.k)
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.n + d)
    }

    pub fn trace(&self) -> BigRational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_idempotent(&self) -> bool {
        let d = self.dim;
        let nonzero: Vec<Vec<usize>> = (0..d)
            .map(|i| (0..d).filter(|&j| !self.get(i, j).is_zero()).collect())
            .collect();
        for i in 0..d {
            for j in 0..d {
                let mut acc = BigRational::zero();
                for &l in &nonzero[i] {
                    let b = self.get(l, j);
                    if !b.is_zero() {
                        acc += self.get(i, l) * b;
                    }
                }
                if &acc != self.get(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `Q` commutes with the diagonal action of `g ∈ S_n`.
    pub fn commutes_with(&self, g: &[usize]) -> bool {
        let act = |idx: usize| {
            let digits: Vec<usize> = self.decode(idx).into_iter().map(|d| g[d]).collect();
            self.encode(&digits)
        };
        let image: Vec<usize> = (0..self.dim).map(act).collect();
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(image[i], image[j]) == self.get(i, j)))
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.dim)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let q = self.get(i, j);
                        if !q.is_zero() {
                            acc += q * x;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `(1/d_λ) tr(g ∘ Q)`, which equals `χ^{λ+(n)}(g)`.
    pub fn bitrace(&self, g: &[usize]) -> BigRational {
        let mut acc = BigRational::zero();
        for a in 0..self.dim {
            let digits: Vec<usize> = self.decode(a).into_iter().map(|d| g[d]).collect();
            acc += self.get(self.encode(&digits), a);
        }
        acc / BigRational::from_integer(dim(&self.lambda))
    }
}

fn decode(mut index: usize, n: usize, k: usize) -> Vec<usize> {
    let mut digits = vec![0; k];
    for slot in digits.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    digits
}

pub fn build_projection(lambda: &YoungDiagram, n: usize) -> Result<ProjectionMatrix, EngineError> {
    let k = lambda.size();
    let size = check_dense(k, n)?;
    let mut coeff: HashMap<Box<[u8]>, BigRational> = HashMap::new();
    let mut entries = vec![BigRational::zero(); size * size];
    let digits: Vec<Vec<usize>> = (0..size).map(|i| decode(i, n, k)).collect();
    let nn = int(n as i64);
    let mut labels = vec![0usize; 2 * k];
    for a in 0..size {
        for b in 0..size {
            labels[..k].copy_from_slice(&digits[a]);
            labels[k..].copy_from_slice(&digits[b]);
            let pattern = SetPartition::from_labels(&labels)?;
            let value = match coeff.get(pattern.rgs()) {
                Some(v) => v.clone(),
                None => {
                    let v = match PartialMatching::from_partition(&pattern) {
                        Ok(pi) => proj_coeff(lambda, &pi)?.eval(&nn)?,
                        Err(_) => BigRational::zero(),
                    };
                    coeff.insert(pattern.rgs().into(), v.clone());
                    v
                }
            };
            entries[a * size + b] = value;
        }
    }
    Ok(ProjectionMatrix { n, k, dim: size, lambda: lambda.clone(), entries })
}

/// `χ^{λ+(n)}(g)` through the projection, `g` given as an image vector.
pub fn bitrace_character(lambda: &YoungDiagram, g: &[usize], n: usize) -> Result<BigRational, EngineError> {
    if g.len() != n {
        return Err(EngineError::Malformed(format!("permutation of degree {} for n = {n}", g.len())));
    }
    Ok(build_projection(lambda, n)?.bitrace(g))
}

/// The `V^λ`-isotypic part of `ξ = (e_1 - e_2) ⊗ ... ⊗ (e_{2k-1} - e_{2k})`
/// under place permutations: `(d_λ/k!) Σ_σ χ^λ(σ) p_{ι(σ)} ξ`.
pub fn xi_isotypic(lambda: &YoungDiagram, n: usize) -> Result<Vec<BigRational>, EngineError> {
    let k = lambda.size();
    let size = check_dense(k, n)?;
    let mut xi = vec![BigRational::zero(); size];
    for signs in 0..(1usize << k) {
        let mut idx = 0;
        let mut sign = 1i64;
        for t in 0..k {
            let second = (signs >> t) & 1 == 1;
            idx = idx * n + 2 * t + second as usize;
            if second {
                sign = -sign;
            }
        }
        xi[idx] = int(sign);
    }
    let scale = BigRational::new(dim(lambda), factorial(k));
    let mut out = vec![BigRational::zero(); size];
    for sigma in all_permutations(k) {
        let chi = BigRational::from_integer(character(lambda, &CycleType::of_permutation(&sigma))?) * &scale;
        if chi.is_zero() {
            continue;
        }
        for (idx, x) in xi.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let digits = decode(idx, n, k);
            let moved: Vec<usize> = (0..k).map(|t| digits[sigma[t]]).collect();
            let target = moved.iter().fold(0, |acc, &d| acc * n + d);
            out[target] += &chi * x;
        }
    }
    Ok(out)
}

/// True iff the `V^λ` component of `ξ` is nonzero, fixed by `Q_{λ,n}` and
/// killed by every other `Q_{μ,n}`, `μ ⊢ k`.
pub fn xi_projector_check(lambda: &YoungDiagram, n: usize) -> Result<bool, EngineError> {
    let v = xi_isotypic(lambda, n)?;
    if v.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    for mu in partitions_of(lambda.size()) {
        let image = build_projection(&mu, n)?.apply(&v);
        let ok = if &mu == lambda { image == v } else { image.iter().all(Zero::is_zero) };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Used by tests and the regression suite: the expected trace of `Q`.
pub fn expected_trace(lambda: &YoungDiagram, n: usize) -> BigRational {
    BigRational::from_integer(dim(lambda)) * dim_stable(lambda).eval_int(n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use crate::partition::{enumerate_submatchings, Budget};

    fn yd(s: &str) -> YoungDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let full = PartialMatching::new(1, &[(0, 0)]).unwrap();
        let rf = |n: &[i64], d: &[i64]| RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d)).unwrap();
        assert_eq!(proj_coeff(&yd("1"), &full).unwrap(), rf(&[-1, 1], &[0, 1]));
        assert_eq!(proj_coeff(&yd("1"), &PartialMatching::empty(1)).unwrap(), rf(&[-1], &[0, 1]));
    }

    #[test]
    fn coefficient_order_bound() {
        for k in 1..=3 {
            for l in partitions_of(k) {
                for pi in enumerate_submatchings(k, &Budget::default()).unwrap() {
                    let c = proj_coeff(&l, &pi).unwrap();
                    if let Some(gap) = c.degree_gap() {
                        assert!(gap >= pi.del() as i64, "{l:?} {pi}");
                    }
                }
            }
        }
    }

    #[test]
    fn standard_representation_projection() {
        // Q = I - J/4
        let q = build_projection(&yd("1"), 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { rational(3, 4) } else { rational(-1, 4) };
                assert_eq!(q.get(i, j), &expected);
            }
        }
    }

    #[test]
    fn projection_laws_small() {
        let q = build_projection(&yd("1,1"), 6).unwrap();
        assert_eq!(q.trace(), int(10));
        let q = build_projection(&yd("2"), 6).unwrap();
        assert!(q.is_idempotent());
        assert!(q.is_symmetric());
        assert_eq!(q.trace(), expected_trace(&yd("2"), 6));
        assert!(q.commutes_with(&[1, 2, 3, 4, 5, 0]));
        assert!(q.commutes_with(&[1, 0, 2, 3, 4, 5]));
    }

    #[test]
    fn bitrace_examples() {
        let q = build_projection(&yd("1"), 5).unwrap();
        for g in all_permutations(5).iter().step_by(7) {
            let fix = g.iter().enumerate().filter(|(i, x)| i == *x).count() as i64;
            assert_eq!(q.bitrace(g), int(fix - 1));
        }
        let id: Vec<usize> = (0..6).collect();
        assert_eq!(bitrace_character(&yd("2"), &id, 6).unwrap(), int(9));
        let swap = [1, 0, 2, 3, 4, 5];
        let mn = character(&yd("1,1").plus_n(6).unwrap(), &CycleType::of_permutation(&swap)).unwrap();
        assert_eq!(bitrace_character(&yd("1,1"), &swap, 6).unwrap(), BigRational::from_integer(mn));
    }

    #[test]
    fn xi_examples() {
        assert!(xi_projector_check(&yd("1"), 3).unwrap());
        assert!(xi_projector_check(&yd("2"), 5).unwrap());
        assert!(xi_projector_check(&yd("1,1"), 5).unwrap());
        let v = xi_isotypic(&yd("1,1"), 5).unwrap();
        let image = build_projection(&yd("2"), 5).unwrap().apply(&v);
        assert!(image.iter().all(Zero::is_zero));
    }

    #[test]
    fn scale_guard() {
        assert!(matches!(build_projection(&yd("1"), 1), Err(EngineError::Malformed(_))));
        assert!(matches!(build_projection(&yd("1,1,1"), 30), Err(EngineError::ScaleGuard { .. })));
    }
}

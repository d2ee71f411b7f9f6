//! The Weingarten function of `S_n` acting on `C^n`, as an exact rational
//! function of `n`, plus a brute-force integration oracle.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use parking_lot::Mutex;
use thiserror::Error;

use crate::algebra::{falling_factorial, falling_from, Polynomial, RationalFunction};
use crate::partition::{bell, Budget, PartitionError, SetPartition};
use crate::symmetric::{all_permutations, next_permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeingartenError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("multi-index lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("brute-force oracle needs 1 ≤ n ≤ 7, got {0}")]
    OracleRange(usize),
    #[error("index entry {entry} is outside [1, {n}]")]
    IndexRange { entry: usize, n: usize },
}

type Key = (Box<[u8]>, Box<[u8]>);

fn cache() -> &'static Mutex<HashMap<Key, Polynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Polynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Wg(σ, τ) · (n)_m` as an integer polynomial:
/// `Σ_{ρ ≤ σ∧τ} μ(ρ,σ) μ(ρ,τ) (n - |ρ|)(n - |ρ| - 1)...(n - m + 1)`.
pub fn weingarten_numerator(
    sigma: &SetPartition,
    tau: &SetPartition,
    budget: &Budget,
) -> Result<Polynomial, WeingartenError> {
    let meet = sigma.meet(tau)?;
    let m = sigma.size();
    let key: Key = (sigma.rgs().into(), tau.rgs().into());
    if let Some(hit) = cache().lock().get(&key) {
        return Ok(hit.clone());
    }
    budget.check(&format!("refinements of a partition of [{m}]"), bell(m))?;
    let mut acc = Polynomial::zero();
    for rho in meet.refinements() {
        let coeff: BigInt = rho.mobius(sigma)? * rho.mobius(tau)?;
        let b = rho.block_count();
        acc = &acc + &falling_from(b as i64, m - b).scale(&BigRational::from_integer(coeff));
    }
    cache().lock().insert(key, acc.clone());
    Ok(acc)
}

/// `Wg_{n,m}(σ, τ) = Σ_{ρ ≤ σ∧τ} μ(ρ,σ) μ(ρ,τ) / (n)_{|ρ|}`.
pub fn weingarten(
    sigma: &SetPartition,
    tau: &SetPartition,
    budget: &Budget,
) -> Result<RationalFunction, WeingartenError> {
    let num = weingarten_numerator(sigma, tau, budget)?;
    Ok(RationalFunction::new(num, falling_factorial(sigma.size())).expect("(n)_m is nonzero"))
}

/// `δ_π(I)`: 1 iff `j ∼ l` in `π` implies `I_j = I_l`. Not an equivalence.
pub fn delta(pi: &SetPartition, index: &[usize]) -> Result<bool, WeingartenError> {
    if pi.size() != index.len() {
        return Err(WeingartenError::LengthMismatch { left: pi.size(), right: index.len() });
    }
    let mut seen: Vec<Option<usize>> = vec![None; pi.block_count()];
    for (j, &v) in index.iter().enumerate() {
        let slot = &mut seen[pi.block_of(j)];
        match slot {
            Some(prev) if *prev != v => return Ok(false),
            _ => *slot = Some(v),
        }
    }
    Ok(true)
}

/// Average over `S_n` of `∏_t g_{I_t J_t}`, where `g_{ij} = [i = g(j)]`.
/// Indices are 1-based.
pub fn brute_force_integral(i: &[usize], j: &[usize], n: usize) -> Result<BigRational, WeingartenError> {
    if i.len() != j.len() {
        return Err(WeingartenError::LengthMismatch { left: i.len(), right: j.len() });
    }
    if !(1..=7).contains(&n) {
        return Err(WeingartenError::OracleRange(n));
    }
    if let Some(&entry) = i.iter().chain(j).find(|&&e| e == 0 || e > n) {
        return Err(WeingartenError::IndexRange { entry, n });
    }
    let mut g: Vec<usize> = (0..n).collect();
    let mut hits = 0u64;
    let mut total = 0u64;
    loop {
        total += 1;
        if i.iter().zip(j).all(|(&a, &b)| g[b - 1] == a - 1) {
            hits += 1;
        }
        if !next_permutation(&mut g) {
            break;
        }
    }
    debug_assert_eq!(total as usize, all_permutations(n).len());
    Ok(BigRational::new(hits.into(), total.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rational};
    use crate::partition::enumerate_partitions;

    fn sp(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn wg(a: &str, b: &str) -> RationalFunction {
        weingarten(&sp(a), &sp(b), &Budget::default()).unwrap()
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(num), Polynomial::from_ints(den)).unwrap()
    }

    #[test]
    fn weingarten_examples() {
        assert_eq!(wg("{{1}}", "{{1}}"), rf(&[1], &[0, 1]));
        assert_eq!(wg("{{1,2}}", "{{1,2}}"), rf(&[1], &[-1, 1]));
        assert_eq!(wg("{{1,2}}", "{{1},{2}}"), rf(&[-1], &[0, -1, 1]));
        assert_eq!(wg("{{1},{2}}", "{{1},{2}}"), rf(&[1], &[0, -1, 1]));
    }

    #[test]
    fn delta_examples() {
        assert!(delta(&SetPartition::singletons(3), &[1, 1, 2]).unwrap());
        assert!(delta(&sp("{{1,2}}"), &[3, 3]).unwrap());
        assert!(!delta(&sp("{{1,2}}"), &[3, 4]).unwrap());
        // implication only: distinct blocks may still share a value
        assert!(delta(&sp("{{1},{2}}"), &[3, 3]).unwrap());
        assert!(delta(&sp("{{1,2}}"), &[1]).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_integral(&[1], &[1], 4).unwrap(), rational(1, 4));
        assert_eq!(brute_force_integral(&[1, 1], &[2, 2], 5).unwrap(), rational(1, 5));
        assert_eq!(brute_force_integral(&[1, 2], &[1, 2], 5).unwrap(), rational(1, 20));
        assert_eq!(brute_force_integral(&[1, 1], &[1, 2], 5).unwrap(), int(0));
        assert!(brute_force_integral(&[1], &[1], 8).is_err());
        assert!(brute_force_integral(&[6], &[1], 5).is_err());
    }

    /// Every multi-index of length `m` over `[n]`, 1-based.
    fn indices(m: usize, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|v| (1..=n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                }))
                .collect();
        }
        out
    }

    #[test]
    fn expansion_reproduces_brute_force() {
        let budget = Budget::default();
        for m in 1..=2 {
            let parts = enumerate_partitions(m, &budget).unwrap();
            for n in [5usize, 6] {
                let values: Vec<Vec<BigRational>> = parts
                    .iter()
                    .map(|a| parts.iter().map(|b| weingarten(a, b, &budget).unwrap().eval_int(n as i64).unwrap()).collect())
                    .collect();
                for i in indices(m, n) {
                    for j in indices(m, n) {
                        let mut acc = int(0);
                        for (ai, a) in parts.iter().enumerate() {
                            if !delta(a, &i).unwrap() {
                                continue;
                            }
                            for (bi, b) in parts.iter().enumerate() {
                                if delta(b, &j).unwrap() {
                                    acc += &values[ai][bi];
                                }
                            }
                        }
                        assert_eq!(acc, brute_force_integral(&i, &j, n).unwrap(), "{i:?} {j:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_and_decaying() {
        let budget = Budget::default();
        for m in 1..=4 {
            let parts = enumerate_partitions(m, &budget).unwrap();
            for a in &parts {
                for b in &parts {
                    let w = weingarten(a, b, &budget).unwrap();
                    assert_eq!(w, weingarten(b, a, &budget).unwrap());
                    let meet = a.meet(b).unwrap().block_count() as i64;
                    assert!(w.degree_gap().unwrap() >= meet, "{a} {b}");
                }
            }
        }
    }
}

//! Exact `E_w[χ^{λ+(n)}]` as a rational function of `n`.
//!
//! For a cyclically reduced word with every generator occurring at least
//! twice,
//!
//! `E = (1/d_λ) Σ*_{σ_f,τ_f} ∏_f Wg(σ_f,τ_f) Σ_{π_1..π_l} ∏_i c(π_i) · N`,
//!
//! which is assembled over a common denominator: with `Wg = g_f / (n)_{m_f}`
//! and `c(π) = dim_stable · h(π) / (n)_{2k}`,
//!
//! `E = dim_stable^l · Σ ∏_f g_f · Σ_π ∏_i h(π_i) · N / (d_λ (n)_{2k}^l ∏_f (n)_{m_f})`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::coloring::{chromatic_polynomial, conflict_graph, ChromaticMemo};
use super::graph::{clique_collides, ContributionGraph, SlotLayout};
use super::projection::projection_weight;
use super::{preprocess_word, EngineError, ReducedWord, Word, WordClass};
use crate::algebra::{falling_factorial, gate_polynomial, Polynomial, RationalFunction};
use crate::partition::{
    enumerate_partitions, enumerate_star_partitions, enumerate_submatchings, submatching_count, Budget,
    PartialMatching, SetPartition, UnionFind, DEFAULT_BUDGET,
};
use crate::symmetric::{dim, dim_stable, partitions_of, YoungDiagram};
use crate::weingarten::weingarten_numerator;

/// Cap on `(number of partial matchings)^{l(w)}`.
pub const PI_TUPLE_LIMIT: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationMode {
    /// `σ_f, τ_f` range over star partitions only.
    Star,
    /// `σ_f, τ_f` range over every partition; the extra terms must cancel.
    AllPartitions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerPolicy {
    Off,
    /// Count violations in the stats.
    Record,
    /// Count, then fail with the first violation (in enumeration order).
    Enforce,
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub mode: EnumerationMode,
    pub budget: Budget,
    /// Applied to non-power words in star mode only.
    pub euler: EulerPolicy,
    pub parallel: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            mode: EnumerationMode::Star,
            budget: Budget::from_env_or(DEFAULT_BUDGET),
            euler: EulerPolicy::Enforce,
            parallel: true,
        }
    }
}

/// Deterministic enumeration counters; independent of scheduling.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub mode: Option<EnumerationMode>,
    /// `(σ_f, τ_f)` families with nonzero Weingarten weight.
    pub partition_families: u64,
    /// Partial matchings kept per letter (those with nonzero projection weight).
    pub matchings_per_letter: u64,
    /// DFS nodes that survived the distinctness check.
    pub nodes: u64,
    pub contradictions_pruned: u64,
    /// Complete non-contradictory graphs.
    pub graphs: u64,
    pub max_vertices: u64,
    pub euler_checked: u64,
    pub euler_violations: u64,
    /// Smallest `-2χ(Γ) + 2Σdel(π_i) - 2k` seen.
    pub min_euler_slack: Option<i64>,
    #[serde(skip)]
    first_violation: Option<(Vec<usize>, String)>,
}

impl EnumerationStats {
    fn merge(mut self, other: EnumerationStats) -> EnumerationStats {
        self.partition_families += other.partition_families;
        self.nodes += other.nodes;
        self.contradictions_pruned += other.contradictions_pruned;
        self.graphs += other.graphs;
        self.max_vertices = self.max_vertices.max(other.max_vertices);
        self.euler_checked += other.euler_checked;
        self.euler_violations += other.euler_violations;
        self.min_euler_slack = match (self.min_euler_slack, other.min_euler_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.first_violation = match (self.first_violation, other.first_violation) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    /// Diagnostics for the earliest Euler violation, if any.
    pub fn first_violation(&self) -> Option<&str> {
        self.first_violation.as_ref().map(|(_, s)| s.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct ExpectedCharacter {
    /// `None` when the word reduces to the identity.
    pub word: Option<ReducedWord>,
    pub class: WordClass,
    pub lambda: YoungDiagram,
    pub value: RationalFunction,
    /// The formula holds for every integer `n ≥ valid_from`.
    pub valid_from: usize,
    pub stats: EnumerationStats,
}

impl ExpectedCharacter {
    pub fn k(&self) -> usize {
        self.lambda.size()
    }

    pub fn word_len(&self) -> usize {
        self.word.as_ref().map_or(0, ReducedWord::len)
    }

    pub fn eval(&self, n: usize) -> Result<BigRational, EngineError> {
        Ok(self.value.eval_int(n as i64)?)
    }
}

pub fn expected_character(
    word: &Word,
    lambda: &YoungDiagram,
    options: &EngineOptions,
) -> Result<ExpectedCharacter, EngineError> {
    let (reduced, class) = preprocess_word(word);
    let k = lambda.size();
    let stable_from = k + lambda.first_row();
    let trivial = |value: RationalFunction, valid_from: usize| ExpectedCharacter {
        word: reduced.clone(),
        class: class.clone(),
        lambda: lambda.clone(),
        value,
        valid_from,
        stats: EnumerationStats::default(),
    };
    if k == 0 {
        return Ok(trivial(RationalFunction::one(), 1));
    }
    match (&class, &reduced) {
        (WordClass::Identity, _) | (_, None) => {
            return Ok(trivial(RationalFunction::from_polynomial(dim_stable(lambda)), stable_from))
        }
        (WordClass::PrimitiveDetected, _) => return Ok(trivial(RationalFunction::zero(), stable_from)),
        _ => {}
    }
    let w = reduced.clone().expect("matched above");
    let check_euler = options.euler != EulerPolicy::Off
        && options.mode == EnumerationMode::Star
        && matches!(class, WordClass::Generic);
    let (value, stats) = general_formula(&w, lambda, options, check_euler)?;
    if options.euler == EulerPolicy::Enforce && stats.euler_violations > 0 {
        return Err(EngineError::InvariantViolation(format!(
            "{} of {} contribution graphs break 2k ≤ -2χ(Γ) + 2Σdel(π_i) for w = {w}, λ = {lambda}; first: {}",
            stats.euler_violations,
            stats.euler_checked,
            stats.first_violation().unwrap_or("?")
        )));
    }
    let valid_from = (2 * k).max(w.max_occurrences() * k);
    Ok(ExpectedCharacter { word: reduced, class, lambda: lambda.clone(), value, valid_from, stats })
}

/// One generator's admissible `(σ_f, τ_f)` pairs with `Wg · (n)_{m_f}`.
struct FamilyChoice {
    sigma: SetPartition,
    tau: SetPartition,
    weight: Polynomial,
    meet_blocks: usize,
}

/// A partial matching placed at one letter.
struct Placed {
    unions: Vec<(usize, usize)>,
    clique: Vec<usize>,
    weight: usize,
    del: usize,
}

struct Shared {
    layout: SlotLayout,
    k: usize,
    /// `placed[i][m]`: matching `m` at letter `i`.
    placed: Vec<Vec<Placed>>,
    weights: Vec<Polynomial>,
    check_euler: bool,
}

fn general_formula(
    w: &ReducedWord,
    lambda: &YoungDiagram,
    options: &EngineOptions,
    check_euler: bool,
) -> Result<(RationalFunction, EnumerationStats), EngineError> {
    let k = lambda.size();
    let l = w.len();
    let budget = &options.budget;

    let matchings = enumerate_submatchings(k, budget)?;
    let tuples = submatching_count(k).checked_pow(l as u32).unwrap_or(u128::MAX);
    if tuples > PI_TUPLE_LIMIT {
        return Err(EngineError::ScaleGuard { what: format!("matching tuples for k = {k}, l(w) = {l}"), needed: tuples, limit: PI_TUPLE_LIMIT });
    }
    let mut kept: Vec<(PartialMatching, Polynomial)> = Vec::new();
    for pi in matchings {
        let h = projection_weight(lambda, &pi)?;
        if !h.is_zero() {
            kept.push((pi, h));
        }
    }

    let layout = SlotLayout::new(w, k);
    let placed: Vec<Vec<Placed>> = (0..l)
        .map(|i| {
            kept.iter()
                .enumerate()
                .map(|(m, (pi, _))| Placed {
                    unions: pi.pairs().into_iter().map(|(t, b)| (layout.out_slot(i, t), layout.in_slot(i, b))).collect(),
                    clique: layout.clique(i, pi),
                    weight: m,
                    del: pi.del(),
                })
                .collect()
        })
        .collect();

    let mut families: Vec<Vec<FamilyChoice>> = Vec::with_capacity(w.rank());
    for f in 0..w.rank() {
        let rows = w.occurrences(f);
        let parts = match options.mode {
            EnumerationMode::Star => enumerate_star_partitions(rows, k, budget)?,
            EnumerationMode::AllPartitions => enumerate_partitions(rows * k, budget)?,
        };
        let mut choices = Vec::new();
        for sigma in &parts {
            for tau in &parts {
                let weight = weingarten_numerator(sigma, tau, budget)?;
                if weight.is_zero() {
                    continue;
                }
                let meet_blocks = sigma.meet(tau)?.block_count();
                choices.push(FamilyChoice { sigma: sigma.clone(), tau: tau.clone(), weight, meet_blocks });
            }
        }
        families.push(choices);
    }
    let combos: u128 = families.iter().map(|c| c.len() as u128).product();
    budget.check("(σ_f, τ_f) families", combos)?;

    let shared = Shared {
        layout,
        k,
        placed,
        weights: kept.into_iter().map(|(_, h)| h).collect(),
        check_euler,
    };
    let run = |memo: &mut ChromaticMemo, index: u128| -> Result<(Polynomial, EnumerationStats), EngineError> {
        let mut rest = index;
        let mut picks = Vec::with_capacity(families.len());
        for choices in &families {
            let len = choices.len() as u128;
            picks.push(&choices[(rest % len) as usize]);
            rest /= len;
        }
        family_term(&shared, &picks, index, memo)
    };

    let identity = || (Polynomial::zero(), EnumerationStats::default());
    let combine = |a: (Polynomial, EnumerationStats), b: (Polynomial, EnumerationStats)| (&a.0 + &b.0, a.1.merge(b.1));
    let (total, mut stats) = if options.parallel {
        (0..combos as u64)
            .into_par_iter()
            .map_init(HashMap::new, |memo, i| run(memo, i as u128))
            .try_reduce(identity, |a, b| Ok(combine(a, b)))?
    } else {
        let mut memo = HashMap::new();
        let mut acc = identity();
        for i in 0..combos {
            acc = combine(acc, run(&mut memo, i)?);
        }
        acc
    };
    stats.mode = Some(options.mode);
    stats.matchings_per_letter = shared.weights.len() as u64;

    let stable = dim_stable(lambda);
    let numerator = &stable.pow(l as u32) * &total;
    let mut denominator = falling_factorial(2 * k).pow(l as u32).scale(&BigRational::from_integer(dim(lambda)));
    for f in 0..w.rank() {
        denominator = &denominator * &falling_factorial(w.occurrences(f) * k);
    }
    Ok((RationalFunction::new(numerator, denominator)?, stats))
}

/// `∏_f g_f · Σ_π ∏_i h(π_i) · N` for one choice of `(σ_f, τ_f)`.
fn family_term(
    shared: &Shared,
    picks: &[&FamilyChoice],
    index: u128,
    memo: &mut ChromaticMemo,
) -> Result<(Polynomial, EnumerationStats), EngineError> {
    let sigma: Vec<SetPartition> = picks.iter().map(|c| c.sigma.clone()).collect();
    let tau: Vec<SetPartition> = picks.iter().map(|c| c.tau.clone()).collect();
    let mut uf = UnionFind::new(shared.layout.slot_count());
    shared.layout.glue_partitions(&mut uf, &sigma, &tau)?;
    let edges: usize = picks.iter().map(|c| c.meet_blocks).sum();

    let mut stats = EnumerationStats { partition_families: 1, ..Default::default() };
    let mut search = Search { shared, edges, index, memo, stats: &mut stats, path: Vec::new(), acc: Polynomial::zero() };
    search.descend(0, &uf, &Polynomial::one(), 0)?;
    let inner = search.acc;
    let weight = picks.iter().fold(Polynomial::one(), |acc, c| &acc * &c.weight);
    Ok((&weight * &inner, stats))
}

struct Search<'s> {
    shared: &'s Shared,
    edges: usize,
    index: u128,
    memo: &'s mut ChromaticMemo,
    stats: &'s mut EnumerationStats,
    path: Vec<usize>,
    acc: Polynomial,
}

impl Search<'_> {
    fn descend(&mut self, letter: usize, uf: &UnionFind, prefix: &Polynomial, del_sum: usize) -> Result<(), EngineError> {
        let shared = self.shared;
        if letter == shared.layout.len {
            return self.leaf(uf, prefix, del_sum);
        }
        for (m, placed) in shared.placed[letter].iter().enumerate() {
            let mut next = uf.clone();
            for &(a, b) in &placed.unions {
                next.union(a, b);
            }
            // gluing is monotone, so a collision persists in every extension
            let collides = (0..=letter).any(|i| clique_collides(&mut next, &shared.placed[i][self.choice(i, m)].clique));
            if collides {
                self.stats.contradictions_pruned += 1;
                continue;
            }
            self.stats.nodes += 1;
            self.path.push(m);
            let prefix = prefix * &shared.weights[placed.weight];
            self.descend(letter + 1, &next, &prefix, del_sum + placed.del)?;
            self.path.pop();
        }
        Ok(())
    }

    /// The matching chosen at letter `i`, with `m` the candidate at the current depth.
    fn choice(&self, i: usize, m: usize) -> usize {
        if i < self.path.len() {
            self.path[i]
        } else {
            m
        }
    }

    fn leaf(&mut self, uf: &UnionFind, prefix: &Polynomial, del_sum: usize) -> Result<(), EngineError> {
        let shared = self.shared;
        let mut uf = uf.clone();
        let cliques: Vec<Vec<usize>> =
            self.path.iter().enumerate().map(|(i, &m)| shared.placed[i][m].clique.clone()).collect();
        let graph = ContributionGraph::from_parts(shared.k, &mut uf, cliques, false, self.edges, del_sum);
        self.stats.graphs += 1;
        self.stats.max_vertices = self.stats.max_vertices.max(graph.vertex_count() as u64);
        if shared.check_euler {
            let slack = graph.euler_slack();
            self.stats.euler_checked += 1;
            self.stats.min_euler_slack = Some(self.stats.min_euler_slack.map_or(slack, |s| s.min(slack)));
            if slack < 0 {
                self.stats.euler_violations += 1;
                if self.stats.first_violation.is_none() {
                    let mut key = vec![self.index as usize];
                    key.extend(&self.path);
                    let msg = format!(
                        "family #{} with matchings {:?}: |V| = {}, |E| = {}, Σdel = {}",
                        self.index,
                        self.path,
                        graph.vertex_count(),
                        graph.edge_count(),
                        del_sum
                    );
                    self.stats.first_violation = Some((key, msg));
                }
            }
        }
        let adj = conflict_graph(graph.vertex_count(), &graph.class_cliques())?;
        let n = chromatic_polynomial(&adj, self.memo);
        self.acc = &self.acc + &(prefix * &n);
        Ok(())
    }
}

/// `E(1/x) · g_{q,k}(x)` as a polynomial in `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialForm {
    pub p: Polynomial,
    pub gate: Polynomial,
    pub q: usize,
    /// `deg P`, `None` when `E = 0`.
    pub degree: Option<usize>,
    /// `3kq + kq² + k`.
    pub degree_bound: usize,
}

pub fn polynomial_form(e: &ExpectedCharacter, q: usize) -> Result<PolynomialForm, EngineError> {
    let l = e.word_len();
    if q < l {
        return Err(EngineError::Malformed(format!("q = {q} is below l(w) = {l}")));
    }
    let k = e.k();
    let gate = gate_polynomial(q, k);
    let scaled = &e.value.reciprocal_substitute() * &RationalFunction::from_polynomial(gate.clone());
    let p = scaled.as_polynomial().cloned().ok_or_else(|| {
        EngineError::InvariantViolation(format!(
            "E(1/x) · g_{{{q},{k}}}(x) = {} is not a polynomial",
            scaled.to_string_in("x")
        ))
    })?;
    let degree_bound = 3 * k * q + k * q * q + k;
    let degree = p.degree();
    if degree.is_some_and(|d| d > degree_bound) {
        return Err(EngineError::InvariantViolation(format!(
            "deg P = {} exceeds 3kq + kq² + k = {degree_bound}",
            degree.unwrap()
        )));
    }
    Ok(PolynomialForm { p, gate, q, degree, degree_bound })
}

/// `φ_w(x) = x^K Σ_{λ⊢K} E_λ(1/x)`.
pub fn phi_w(word: &Word, big_k: usize, options: &EngineOptions) -> Result<RationalFunction, EngineError> {
    if big_k == 0 {
        return Err(EngineError::Malformed("K must be positive".into()));
    }
    let mut sum = RationalFunction::zero();
    for lambda in partitions_of(big_k) {
        sum = &sum + &expected_character(word, &lambda, options)?.value;
    }
    let x_k = RationalFunction::from_polynomial(Polynomial::monomial(BigRational::from_integer(BigInt::from(1)), big_k));
    let phi = &sum.reciprocal_substitute() * &x_k;
    if phi.denominator().coeff(0).is_zero() {
        return Err(EngineError::InvariantViolation(format!("φ_w = {} has a pole at 0", phi.to_string_in("x"))));
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rational};
    use crate::partition::enumerate_submatchings;
    use crate::symmetric::{character, CycleType};
    use crate::engine::count_assignments;

    fn yd(s: &str) -> YoungDiagram {
        s.parse().unwrap()
    }

    fn word(s: &str) -> Word {
        Word::parse(s, None).unwrap()
    }

    fn serial() -> EngineOptions {
        EngineOptions { parallel: false, budget: Budget::default(), ..Default::default() }
    }

    fn ec(w: &str, l: &str) -> ExpectedCharacter {
        expected_character(&word(w), &yd(l), &EngineOptions { budget: Budget::default(), ..Default::default() })
            .unwrap()
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(num), Polynomial::from_ints(den)).unwrap()
    }

    /// Average of `χ^{λ+(n)}(w(g_1, g_2))` over all of `S_n²`, words applied
    /// right to left.
    fn exhaustive(w: &str, lambda: &YoungDiagram, n: usize) -> BigRational {
        let w = word(w);
        let perms = crate::symmetric::all_permutations(n);
        let shape = lambda.plus_n(n).unwrap();
        let rank = w.rank();
        let inverse = |p: &Vec<usize>| {
            let mut inv = vec![0; p.len()];
            for (i, &x) in p.iter().enumerate() {
                inv[x] = i;
            }
            inv
        };
        let inverses: Vec<Vec<usize>> = perms.iter().map(inverse).collect();
        let mut cache: HashMap<CycleType, BigInt> = HashMap::new();
        let mut total = BigInt::zero();
        let mut count = 0u64;
        let mut idx = vec![0usize; rank];
        loop {
            let mut g: Vec<usize> = (0..n).collect();
            for letter in w.letters().iter().rev() {
                let p = if letter.inverse { &inverses[idx[letter.generator]] } else { &perms[idx[letter.generator]] };
                g = g.iter().map(|&x| p[x]).collect();
            }
            let ct = CycleType::of_permutation(&g);
            let chi = cache.entry(ct.clone()).or_insert_with(|| character(&shape, &ct).unwrap()).clone();
            total += chi;
            count += 1;
            let mut f = 0;
            loop {
                if f == rank {
                    return BigRational::new(total, BigInt::from(count));
                }
                idx[f] += 1;
                if idx[f] < perms.len() {
                    break;
                }
                idx[f] = 0;
                f += 1;
            }
        }
    }

    #[test]
    fn commutator_is_inverse_stable_dimension() {
        for l in ["1", "2", "1,1"] {
            let e = ec("abAB", l);
            let expected = RationalFunction::from_polynomial(dim_stable(&yd(l))).recip().unwrap();
            assert_eq!(e.value, expected, "λ = {l}");
            assert_eq!(e.stats.euler_violations, 0);
        }
        assert_eq!(ec("abAB", "1").value, rf(&[1], &[-1, 1]));
    }

    #[test]
    fn commutator_matches_exhaustive_oracle() {
        let e = ec("abAB", "1");
        assert_eq!(e.eval(4).unwrap(), rational(1, 3));
        assert_eq!(exhaustive("abAB", &yd("1"), 4), rational(1, 3));
        let e = ec("abAB", "2");
        assert_eq!(e.eval(4).unwrap(), exhaustive("abAB", &yd("2"), 4));
    }

    #[test]
    fn square_is_constant_one() {
        let e = ec("aa", "1");
        assert_eq!(e.value, RationalFunction::one());
        assert!(matches!(e.class, WordClass::ProperPower { exponent: 2, .. }));
        assert_eq!(exhaustive("aa", &yd("1"), 4), int(1));
        assert_eq!(ec("aa", "2").eval(4).unwrap(), exhaustive("aa", &yd("2"), 4));
    }

    #[test]
    fn other_words_match_oracle() {
        for w in ["aabb", "abaB"] {
            for l in ["1", "2", "1,1"] {
                let e = ec(w, l);
                let n = e.valid_from.max(4);
                assert_eq!(e.eval(n).unwrap(), exhaustive(w, &yd(l), n), "{w} {l}");
                assert!(e.value.degree_gap().unwrap() >= e.k() as i64, "{w} {l}");
            }
        }
    }

    #[test]
    fn undetected_primitive_vanishes() {
        // x1 x2 x1 x2 x2 is primitive with every generator repeated
        let e = ec("ababb", "1");
        assert_eq!(e.class, WordClass::Generic);
        assert!(e.value.is_zero());
    }

    #[test]
    fn shortcut_classes() {
        assert!(ec("ab", "1").value.is_zero());
        assert_eq!(ec("aA", "1").value, rf(&[-1, 1], &[1]));
        assert_eq!(ec("abBA", "2").value, RationalFunction::from_polynomial(dim_stable(&yd("2"))));
    }

    #[test]
    fn conjugation_invariance() {
        let base = ec("abAB", "2").value;
        for w in ["bABa", "ABab", "BabA", "cabABC"] {
            assert_eq!(ec(w, "2").value, base, "{w}");
        }
    }

    #[test]
    fn all_partitions_mode_agrees() {
        let opts = EngineOptions { mode: EnumerationMode::AllPartitions, ..serial() };
        let all = expected_character(&word("abAB"), &yd("1"), &opts).unwrap();
        let star = ec("abAB", "1");
        assert_eq!(all.value, star.value);
        assert_eq!(all.eval(4).unwrap(), rational(1, 3));
        assert!(all.stats.partition_families > star.stats.partition_families);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let a = expected_character(&word("aabb"), &yd("2"), &serial()).unwrap();
        let b = ec("aabb", "2");
        assert_eq!(a.value, b.value);
        assert_eq!(a.stats, b.stats);
    }

    /// Rebuilds every term from scratch with `ContributionGraph` and
    /// `count_assignments`, without pruning.
    #[test]
    fn search_matches_unpruned_sum() {
        let w = preprocess_word(&word("abAB")).0.unwrap();
        let lambda = yd("1");
        let budget = Budget::default();
        let star = enumerate_star_partitions(2, 1, &budget).unwrap();
        let matchings = enumerate_submatchings(1, &budget).unwrap();
        let mut total = Polynomial::zero();
        for s0 in &star {
            for t0 in &star {
                for s1 in &star {
                    for t1 in &star {
                        let g = &weingarten_numerator(s0, t0, &budget).unwrap()
                            * &weingarten_numerator(s1, t1, &budget).unwrap();
                        for code in 0..matchings.len().pow(4) {
                            let pis: Vec<PartialMatching> =
                                (0..4).map(|i| matchings[code / matchings.len().pow(i) % matchings.len()].clone()).collect();
                            let graph = ContributionGraph::build(
                                &w,
                                1,
                                &[s0.clone(), s1.clone()],
                                &[t0.clone(), t1.clone()],
                                &pis,
                            )
                            .unwrap();
                            let h = pis.iter().fold(Polynomial::one(), |acc, p| &acc * &projection_weight(&lambda, p).unwrap());
                            total = &total + &(&(&g * &h) * &count_assignments(&graph).unwrap());
                        }
                    }
                }
            }
        }
        let stable = dim_stable(&lambda);
        let den = &falling_factorial(2).pow(4) * &(&falling_factorial(2) * &falling_factorial(2));
        let e = RationalFunction::new(&stable.pow(4) * &total, den).unwrap();
        assert_eq!(e, ec("abAB", "1").value);
    }

    #[test]
    fn polynomial_form_examples() {
        let e = ec("abAB", "1");
        let form = polynomial_form(&e, 4).unwrap();
        assert_eq!(form.degree_bound, 29);
        assert!(form.degree.unwrap() <= 29);
        let ratio = RationalFunction::new(form.p.clone(), form.gate.clone()).unwrap();
        assert_eq!(ratio, rf(&[0, 1], &[1, -1]));
        let sq = polynomial_form(&ec("aa", "1"), 2).unwrap();
        assert_eq!(sq.p, sq.gate);
        assert!(polynomial_form(&e, 3).is_err());
    }

    #[test]
    fn phi_examples() {
        let opts = EngineOptions { budget: Budget::default(), ..Default::default() };
        let phi = phi_w(&word("abAB"), 1, &opts).unwrap();
        assert_eq!(phi, rf(&[0, 0, 1], &[1, -1]));
        assert!(phi.taylor_coefficients(2).unwrap().iter().all(Zero::is_zero));
        let phi2 = phi_w(&word("abAB"), 2, &opts).unwrap();
        assert!(phi2.taylor_coefficients(4).unwrap().iter().all(Zero::is_zero));
        assert_eq!(phi_w(&word("aa"), 1, &opts).unwrap(), rf(&[0, 1], &[1]));
        assert_eq!(phi_w(&word("aA"), 1, &opts).unwrap(), rf(&[1, -1], &[1]));
    }
}

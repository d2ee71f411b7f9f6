//! The golden regression suite: every acceptance criterion as a named,
//! self-contained check. Shared by the `acceptance` test target and the
//! `regress` subcommand.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{format_rational, RationalFunction};
use crate::engine::{
    bitrace_character, build_projection, expected_character, expected_trace, phi_w, polynomial_form,
    xi_projector_check, EngineOptions, EulerPolicy, ExpectedCharacter, Word,
};
use crate::partition::{enumerate_partitions, Budget};
use crate::sampling::{
    exhaustive_expected_character, mc_expected_character, random_permutation, random_tuple, Permutation,
};
use crate::spectra::{
    alon_boppana, dense_extremes, spectral_experiment, spectral_gap, ExperimentConfig, LanczosOptions, SchreierGraph,
};
use crate::symmetric::{dim_stable, partitions_of, YoungDiagram};
use crate::weingarten::{brute_force_integral, delta, weingarten};

pub const COMMUTATOR: &str = "abAB";
pub const SQUARE: &str = "aa";
pub const NON_POWER_WORDS: [&str; 3] = ["abAB", "aabb", "abaB"];
pub const REGRESSION_WORDS: [&str; 4] = ["abAB", "aa", "aabb", "abaB"];

pub const MC_SEED: u64 = 20_240_601;
pub const MC_SAMPLES: u64 = 200_000;
pub const SPECTRAL_SEEDS: [u64; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
/// `(n, k, r, seed)` graphs small enough for the dense oracle.
pub const DENSE_GRAPHS: [(usize, usize, usize, u64); 5] =
    [(40, 1, 2, 11), (12, 2, 2, 12), (20, 2, 3, 13), (9, 3, 2, 14), (45, 2, 2, 15)];

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "commutator exactness"),
    (2, "proper-power case"),
    (3, "decay for non-powers"),
    (4, "weingarten correctness"),
    (5, "projection suite"),
    (6, "polynomial form"),
    (7, "taylor vanishing"),
    (8, "euler-characteristic invariant"),
    (9, "monte carlo consistency"),
    (10, "spectral-gap experiment"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Wall time; kept out of serialized reports so they stay byte-stable.
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionReport {
    /// One line: `[PASS]  3 decay for non-powers: ...`. No timing, so
    /// repeated runs print identical lines.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

type Outcome = Result<(bool, String), String>;

/// Runs one criterion; unknown ids and internal errors become failures.
pub fn run_criterion(id: usize) -> CriterionReport {
    let start = Instant::now();
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n).to_string();
    let outcome = match id {
        1 => commutator_exactness(),
        2 => proper_power(),
        3 => decay(),
        4 => weingarten_suite(),
        5 => projection_suite(),
        6 => polynomial_forms(),
        7 => taylor_vanishing(),
        8 => euler_invariant(),
        9 => monte_carlo(),
        10 => spectral(),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id)).collect()
}

fn options() -> EngineOptions {
    EngineOptions { budget: Budget::default(), euler: EulerPolicy::Record, ..Default::default() }
}

fn word(text: &str) -> Result<Word, String> {
    Word::parse(text, None).map_err(|e| e.to_string())
}

fn expected(w: &str, lambda: &YoungDiagram) -> Result<ExpectedCharacter, String> {
    expected_character(&word(w)?, lambda, &options()).map_err(|e| format!("{w}, {lambda}: {e}"))
}

fn diagrams(max_k: usize) -> Vec<YoungDiagram> {
    (1..=max_k).flat_map(partitions_of).collect()
}

/// Exact engine-vs-oracle comparison at each `n`; returns mismatches.
fn against_oracle(w: &str, e: &ExpectedCharacter, ns: &[usize]) -> Result<Vec<String>, String> {
    let parsed = word(w)?;
    let mut bad = Vec::new();
    for &n in ns {
        let engine = e.eval(n).map_err(|err| err.to_string())?;
        let oracle = exhaustive_expected_character(&parsed, &e.lambda, n).map_err(|err| err.to_string())?;
        if engine != oracle {
            bad.push(format!("{w} λ={} n={n}: {} vs {}", e.lambda, format_rational(&engine), format_rational(&oracle)));
        }
    }
    Ok(bad)
}

fn commutator_exactness() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for lambda in diagrams(2) {
        let e = expected(COMMUTATOR, &lambda)?;
        let target = RationalFunction::from_polynomial(dim_stable(&lambda)).recip().map_err(|e| e.to_string())?;
        if e.value != target {
            bad.push(format!("λ={lambda}: {} ≠ 1/dim", e.value.to_string_in("n")));
        }
        bad.extend(against_oracle(COMMUTATOR, &e, &[4, 5])?);
        checked += 1;
    }
    Ok((bad.is_empty(), summarize(format!("{checked} diagrams symbolic + n∈{{4,5}}"), bad)))
}

fn proper_power() -> Outcome {
    let lambda = YoungDiagram::new(vec![1]).map_err(|e| e.to_string())?;
    let e = expected(SQUARE, &lambda)?;
    let mut bad = Vec::new();
    if e.value != RationalFunction::one() {
        bad.push(format!("E = {}", e.value.to_string_in("n")));
    }
    bad.extend(against_oracle(SQUARE, &e, &[3, 4])?);
    Ok((bad.is_empty(), summarize("E(aa, (1)) = 1, n∈{3,4}".into(), bad)))
}

fn decay() -> Outcome {
    let mut bad = Vec::new();
    let mut gaps = Vec::new();
    for w in NON_POWER_WORDS {
        for lambda in diagrams(2) {
            let e = expected(w, &lambda)?;
            let k = lambda.size() as i64;
            match e.value.degree_gap() {
                Some(g) if g >= k => gaps.push(format!("{w}/{lambda}:{g}")),
                // E = 0 decays at every order
                None => gaps.push(format!("{w}/{lambda}:∞")),
                Some(g) => bad.push(format!("{w} λ={lambda}: gap {g} < {k}")),
            }
        }
    }
    Ok((bad.is_empty(), summarize(format!("gaps {}", gaps.join(" ")), bad)))
}

/// Every multi-index of length `m` over `[n]`, 1-based.
fn multi_indices(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn weingarten_suite() -> Outcome {
    let budget = Budget::default();
    let mut bad = Vec::new();
    let mut integrals = 0usize;
    for m in 1..=3 {
        let parts = enumerate_partitions(m, &budget).map_err(|e| e.to_string())?;
        for n in [5usize, 6] {
            let mut values = Vec::new();
            for a in &parts {
                let mut row = Vec::new();
                for b in &parts {
                    row.push(weingarten(a, b, &budget).map_err(|e| e.to_string())?.eval_int(n as i64).map_err(|e| e.to_string())?);
                }
                values.push(row);
            }
            let indices = multi_indices(m, n);
            // δ_π(I) for every partition and index, computed once
            let deltas: Vec<Vec<bool>> = indices
                .iter()
                .map(|i| parts.iter().map(|p| delta(p, i)).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for (ii, i) in indices.iter().enumerate() {
                for (jj, j) in indices.iter().enumerate() {
                    let mut acc = BigRational::zero();
                    for (a, row) in values.iter().enumerate() {
                        if deltas[ii][a] {
                            for (b, v) in row.iter().enumerate() {
                                if deltas[jj][b] {
                                    acc += v;
                                }
                            }
                        }
                    }
                    let oracle = brute_force_integral(i, j, n).map_err(|e| e.to_string())?;
                    integrals += 1;
                    if acc != oracle && bad.len() < 5 {
                        bad.push(format!("m={m} n={n} I={i:?} J={j:?}"));
                    }
                }
            }
        }
    }
    let mut pairs = 0usize;
    for m in 1..=4 {
        let parts = enumerate_partitions(m, &budget).map_err(|e| e.to_string())?;
        for a in &parts {
            for b in &parts {
                let w = weingarten(a, b, &budget).map_err(|e| e.to_string())?;
                let meet = a.meet(b).map_err(|e| e.to_string())?.block_count() as i64;
                pairs += 1;
                if w.degree_gap().is_some_and(|g| g < meet) {
                    bad.push(format!("order bound fails for {a}, {b}"));
                }
            }
        }
    }
    Ok((bad.is_empty(), summarize(format!("{integrals} integrals, {pairs} order bounds"), bad)))
}

fn projection_suite() -> Outcome {
    const N: usize = 6;
    let mut bad = Vec::new();
    let transposition: Vec<usize> = [1, 0].into_iter().chain(2..N).collect();
    let cycle: Vec<usize> = (1..N).chain([0]).collect();
    let samples: Vec<Permutation> = (0..20).map(|s| random_permutation(N, MC_SEED, s)).collect();
    for lambda in diagrams(2) {
        let q = build_projection(&lambda, N).map_err(|e| e.to_string())?;
        if !q.is_idempotent() {
            bad.push(format!("λ={lambda}: Q² ≠ Q"));
        }
        if q.trace() != expected_trace(&lambda, N) {
            bad.push(format!("λ={lambda}: trace {}", format_rational(&q.trace())));
        }
        if !q.commutes_with(&transposition) || !q.commutes_with(&cycle) {
            bad.push(format!("λ={lambda}: does not commute with S_{N}"));
        }
        for g in &samples {
            let chi = bitrace_character(&lambda, g.images(), N).map_err(|e| e.to_string())?;
            if q.bitrace(g.images()) != chi {
                bad.push(format!("λ={lambda}: bitrace differs at {g}"));
            }
        }
        if !xi_projector_check(&lambda, N).map_err(|e| e.to_string())? {
            bad.push(format!("λ={lambda}: ξ check fails"));
        }
    }
    Ok((bad.is_empty(), summarize(format!("n={N}, 3 diagrams, 20 permutations"), bad)))
}

fn polynomial_forms() -> Outcome {
    let mut bad = Vec::new();
    let mut degrees = Vec::new();
    let mut tighter = 0usize;
    let mut total = 0usize;
    for w in REGRESSION_WORDS {
        for lambda in diagrams(2) {
            let e = expected(w, &lambda)?;
            let q = e.word_len();
            match polynomial_form(&e, q) {
                Ok(form) => {
                    let k = lambda.size();
                    total += 1;
                    if form.degree.is_none_or(|d| d <= 3 * k * q + q * q) {
                        tighter += 1;
                    }
                    degrees.push(format!("{w}/{lambda}:{}", form.degree.map_or("-".into(), |d| d.to_string())));
                }
                Err(err) => bad.push(format!("{w} λ={lambda}: {err}")),
            }
        }
    }
    let note = format!("deg P {}; 3kq+q² holds in {tighter}/{total}", degrees.join(" "));
    Ok((bad.is_empty(), summarize(note, bad)))
}

fn leading_zeros(coeffs: &[BigRational]) -> usize {
    coeffs.iter().take_while(|c| c.is_zero()).count()
}

fn taylor_vanishing() -> Outcome {
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for (w, big_k, need) in [(COMMUTATOR, 1, 2), (COMMUTATOR, 2, 4), (SQUARE, 1, 1)] {
        let phi = phi_w(&word(w)?, big_k, &options()).map_err(|e| e.to_string())?;
        let coeffs = phi.taylor_coefficients(need + 1).map_err(|e| e.to_string())?;
        let zeros = leading_zeros(&coeffs);
        notes.push(format!("{w} K={big_k}: {zeros} zero"));
        if zeros < need {
            bad.push(format!("{w} K={big_k}: only {zeros} of {need} coefficients vanish"));
        }
    }
    Ok((bad.is_empty(), summarize(notes.join(", "), bad)))
}

fn euler_invariant() -> Outcome {
    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut min_slack: Option<i64> = None;
    let mut first = None;
    for w in NON_POWER_WORDS {
        for lambda in diagrams(2) {
            let stats = expected(w, &lambda)?.stats;
            checked += stats.euler_checked;
            violations += stats.euler_violations;
            if let Some(s) = stats.min_euler_slack {
                min_slack = Some(min_slack.map_or(s, |m| m.min(s)));
            }
            if first.is_none() {
                first = stats.first_violation().map(|v| format!("{w} λ={lambda}: {v}"));
            }
        }
    }
    let note = format!(
        "{checked} graphs checked, {violations} violations, min slack {}",
        min_slack.map_or("-".into(), |s| s.to_string())
    );
    let bad = first.into_iter().collect();
    Ok((violations == 0 && checked > 0, summarize(note, bad)))
}

fn monte_carlo() -> Outcome {
    let lambda = YoungDiagram::new(vec![1]).map_err(|e| e.to_string())?;
    let report = mc_expected_character(&word(COMMUTATOR)?, &lambda, 50, MC_SAMPLES, MC_SEED).map_err(|e| e.to_string())?;
    let target = 1.0 / 49.0;
    let z = (report.mean - target).abs() / report.stderr;
    let note = format!("mean {:.5} vs {:.5}, stderr {:.5}, |z| = {z:.2}", report.mean, target, report.stderr);
    Ok((z <= 4.0, note))
}

/// Pinned spectral experiment settings: `r = 2`, `k = 2`, `n = 300`.
pub fn spectral_config() -> ExperimentConfig {
    let r = 2;
    ExperimentConfig {
        n: 300,
        k: 2,
        r,
        seeds: SPECTRAL_SEEDS.to_vec(),
        // absolute residual 1e-8
        lanczos: LanczosOptions { tolerance: 1e-8 / (2 * r) as f64, max_iterations: 5000, ..Default::default() },
        max_attempts: 8,
    }
}

fn spectral() -> Outcome {
    let config = spectral_config();
    let rows = spectral_experiment(&config).map_err(|e| e.to_string())?;
    let threshold = alon_boppana(config.r) + 0.25;
    let floor = alon_boppana(config.r) - 0.5;
    let mut bad = Vec::new();
    let mut below = 0;
    let mut floor_ok = true;
    let mut worst: f64 = 0.0;
    for row in &rows {
        worst = worst.max(row.residual);
        if !row.connected || row.residual.is_nan() || row.residual > 1e-8 {
            bad.push(format!("seed {}: residual {:.2e}", row.seed, row.residual));
        }
        match row.lambda_nontrivial {
            Some(l) if l <= threshold => below += 1,
            _ => {}
        }
        if row.lambda_nontrivial.is_some_and(|l| l < floor) {
            floor_ok = false;
        }
    }
    if below < 9 {
        bad.push(format!("only {below}/10 below {threshold:.4}"));
    }
    let mut dense_worst: f64 = 0.0;
    for (n, k, r, seed) in DENSE_GRAPHS {
        let g = SchreierGraph::new(n, k, &random_tuple(n, r, seed, 0)).map_err(|e| e.to_string())?;
        let opts = LanczosOptions { tolerance: 1e-8 / (2 * r) as f64, max_iterations: 5000, seed, ..Default::default() };
        let rep = spectral_gap(&g, &opts).map_err(|e| e.to_string())?;
        let Some((lo, hi)) = dense_extremes(&g).map_err(|e| e.to_string())? else {
            if rep.lambda_nontrivial.is_some() {
                bad.push(format!("graph ({n},{k},{r}): dense spectrum is trivial"));
            }
            continue;
        };
        let diff = (rep.lambda_top.unwrap_or(f64::NAN) - hi).abs().max((rep.lambda_bottom.unwrap_or(f64::NAN) - lo).abs());
        dense_worst = dense_worst.max(diff);
        if diff.is_nan() || diff > 1e-6 {
            bad.push(format!("graph ({n},{k},{r}): Lanczos off dense by {diff:.2e}"));
        }
    }
    let lambdas: Vec<String> =
        rows.iter().map(|r| r.lambda_nontrivial.map_or("-".into(), |l| format!("{l:.4}"))).collect();
    let note = format!(
        "{below}/10 ≤ {threshold:.4} (λ: {}), max residual {worst:.1e}, dense gap {dense_worst:.1e}, floor {}",
        lambdas.join(" "),
        if floor_ok { "ok" } else { "violated" }
    );
    Ok((bad.is_empty(), summarize(note, bad)))
}

fn summarize(note: String, bad: Vec<String>) -> String {
    if bad.is_empty() {
        note
    } else {
        format!("{note}; failures: {}", bad.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for id in [2, 3, 7] {
            let r = run_criterion(id);
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        let r = run_criterion(11);
        assert!(!r.passed);
        assert_eq!(r.name, "unknown");
    }

    #[test]
    fn multi_indices_count() {
        assert_eq!(multi_indices(3, 4).len(), 64);
        assert_eq!(multi_indices(0, 4), vec![Vec::<usize>::new()]);
    }
}

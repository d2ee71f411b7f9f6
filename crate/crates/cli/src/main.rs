//! `wordchar`: batch front end for exact expected characters, their oracles
//! and the Schreier-graph experiment.
//!
//! Exit status: 0 on success, 1 when a checked identity fails, 2 on usage
//! or input errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wordchar::algebra::format_rational;
use wordchar::engine::{
    bitrace_character, build_projection, expected_character, expected_trace, phi_w, polynomial_form,
    xi_projector_check, EngineError, EngineOptions, EnumerationMode, Word,
};
use wordchar::partition::{Budget, SetPartition, DEFAULT_BUDGET};
use wordchar::regress::{run_criterion, CRITERIA};
use wordchar::sampling::{exhaustive_expected_character, mc_expected_character, random_permutation};
use wordchar::spectra::{spectral_experiment, ExperimentConfig, ExperimentRow, LanczosOptions};
use wordchar::symmetric::YoungDiagram;
use wordchar::weingarten::weingarten;

#[derive(Parser, Debug)]
#[command(name = "wordchar", version, about = "Exact expected characters of word-random permutations")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Star,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact E[χ^{λ+(n)}(w)] as a rational function of n.
    ExpectedChar {
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        rank: Option<usize>,
        /// Evaluate at these n.
        #[arg(long, num_args = 1..)]
        eval: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Star)]
        mode: Mode,
    },
    /// P(x) = E(1/x) · g_{q,k}(x) and its degree bound.
    PolyForm {
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        rank: Option<usize>,
        /// Defaults to the reduced word length.
        #[arg(long)]
        q: Option<usize>,
    },
    /// φ_w(x) = x^K Σ_{λ⊢K} E_λ(1/x) and its leading Maclaurin coefficients.
    Phi {
        #[arg(long)]
        word: String,
        #[arg(long = "K", visible_alias = "big-k")]
        big_k: usize,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// Monte Carlo estimate with a fixed seed.
    Mc {
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Exact average over all of S_n^r.
    Exhaustive {
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Wg(σ, τ) as a rational function of n.
    Weingarten {
        #[arg(long)]
        m: usize,
        /// E.g. "{{1,2},{3}}".
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tau: String,
        #[arg(long, num_args = 1..)]
        eval: Vec<usize>,
    },
    /// Exact checks of the isotypic projection on (C^n)^{⊗k}.
    ProjectionCheck {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: usize,
        /// Random permutations for the bitrace check.
        #[arg(long, default_value_t = 20)]
        perms: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Largest nontrivial eigenvalue of random Schreier graphs on [n]_k.
    SpectralGap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        /// Absolute residual tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
        /// Also write the CSV table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The golden regression suite.
    Regress {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        if e.is_invariant_violation() {
            Failure::Invariant(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn usage<E: ToString>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

struct Report {
    value: Value,
    text: String,
    csv: Option<String>,
    /// A checked identity failed; the report is still emitted.
    violation: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(usage)?;
    }
    let format = if cli.json { Format::Json } else { cli.format };
    let report = dispatch(cli.command)?;
    let body = match format {
        Format::Text => report.text,
        Format::Json => serde_json::to_string_pretty(&report.value).map_err(usage)? + "\n",
        Format::Csv => report.csv.ok_or_else(|| usage("CSV output is only available for spectral-gap"))?,
    };
    match &cli.output {
        Some(path) => fs::write(path, body).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => io::stdout().write_all(body.as_bytes()).map_err(usage)?,
    }
    match report.violation {
        Some(msg) => Err(Failure::Invariant(msg)),
        None => Ok(()),
    }
}

fn parse_word(text: &str, rank: Option<usize>) -> Result<Word, Failure> {
    Word::parse(text, rank).map_err(usage)
}

fn parse_lambda(text: &str) -> Result<YoungDiagram, Failure> {
    text.parse().map_err(usage)
}

fn engine_options(mode: Mode) -> EngineOptions {
    EngineOptions {
        mode: match mode {
            Mode::Star => EnumerationMode::Star,
            Mode::All => EnumerationMode::AllPartitions,
        },
        budget: Budget::from_env_or(DEFAULT_BUDGET),
        ..Default::default()
    }
}

/// Sorted-key JSON value of any serializable result.
fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(usage)
}

fn dispatch(command: Command) -> Result<Report, Failure> {
    match command {
        Command::ExpectedChar { word, lambda, rank, eval, mode } => {
            let w = parse_word(&word, rank)?;
            let lambda = parse_lambda(&lambda)?;
            let e = expected_character(&w, &lambda, &engine_options(mode))?;
            let mut evals = Vec::new();
            let mut text = format!("E[χ^{{{lambda}+(n)}}({w})] = {}\n", e.value);
            for &n in &eval {
                if n < e.valid_from {
                    return Err(usage(format!("n = {n} is below the validity range n ≥ {}", e.valid_from)));
                }
                let v = format_rational(&e.eval(n)?);
                text += &format!("n = {n}: {v}\n");
                evals.push(json!({ "n": n, "value": v }));
            }
            let value = json!({
                "word": w.to_string(),
                "class": e.class.name(),
                "k": e.k(),
                "lambda": lambda,
                "rational": e.value,
                "evals": evals,
                "degree_gap": e.value.degree_gap(),
                "valid_from": e.valid_from,
                "enumeration_stats": to_value(&e.stats)?,
            });
            Ok(Report { value, text, csv: None, violation: None })
        }
        Command::PolyForm { word, lambda, rank, q } => {
            let w = parse_word(&word, rank)?;
            let lambda = parse_lambda(&lambda)?;
            let e = expected_character(&w, &lambda, &engine_options(Mode::Star))?;
            let q = q.unwrap_or(e.word_len());
            let form = polynomial_form(&e, q)?;
            let degree = form.degree.map_or("-".to_string(), |d| d.to_string());
            let text = format!(
                "P(x) = {}\ng_{{{q},{}}}(x) = {}\ndeg P = {degree} ≤ {}\n",
                form.p.to_string_in("x"),
                e.k(),
                form.gate.to_string_in("x"),
                form.degree_bound
            );
            let mut value = to_value(&form)?;
            value["word"] = json!(w.to_string());
            value["lambda"] = to_value(&lambda)?;
            Ok(Report { value, text, csv: None, violation: None })
        }
        Command::Phi { word, big_k, rank, terms } => {
            let w = parse_word(&word, rank)?;
            let phi = phi_w(&w, big_k, &engine_options(Mode::Star))?;
            let coeffs = phi.taylor_coefficients(terms).map_err(usage)?;
            let coeffs: Vec<String> = coeffs.iter().map(format_rational).collect();
            let text = format!("φ(x) = {}\nMaclaurin: {}\n", phi.to_string_in("x"), coeffs.join(", "));
            let value = json!({ "word": w.to_string(), "K": big_k, "phi": phi, "taylor": coeffs });
            Ok(Report { value, text, csv: None, violation: None })
        }
        Command::Mc { word, lambda, n, samples, seed, rank } => {
            let w = parse_word(&word, rank)?;
            let lambda = parse_lambda(&lambda)?;
            let rep = mc_expected_character(&w, &lambda, n, samples, seed).map_err(usage)?;
            let text = format!("mean = {} ± {} ({} samples, seed {})\n", rep.mean, rep.stderr, rep.samples, rep.seed);
            let mut value = to_value(&rep)?;
            value["word"] = json!(w.to_string());
            value["lambda"] = to_value(&lambda)?;
            value["n"] = json!(n);
            Ok(Report { value, text, csv: None, violation: None })
        }
        Command::Exhaustive { word, lambda, n, rank } => {
            let w = parse_word(&word, rank)?;
            let lambda = parse_lambda(&lambda)?;
            let v = format_rational(&exhaustive_expected_character(&w, &lambda, n).map_err(usage)?);
            let text = format!("{v}\n");
            let value = json!({ "word": w.to_string(), "lambda": lambda, "n": n, "value": v });
            Ok(Report { value, text, csv: None, violation: None })
        }
        Command::Weingarten { m, sigma, tau, eval } => {
            let sigma: SetPartition = sigma.parse().map_err(usage)?;
            let tau: SetPartition = tau.parse().map_err(usage)?;
            if sigma.size() != m || tau.size() != m {
                return Err(usage(format!("partitions of [{}] and [{}] given for m = {m}", sigma.size(), tau.size())));
            }
            let wg = weingarten(&sigma, &tau, &Budget::from_env_or(DEFAULT_BUDGET)).map_err(usage)?;
            let mut text = format!("Wg({sigma}, {tau}) = {wg}\n");
            let mut evals = Vec::new();
            for &n in &eval {
                let v = format_rational(&wg.eval_int(n as i64).map_err(usage)?);
                text += &format!("n = {n}: {v}\n");
                evals.push(json!({ "n": n, "value": v }));
            }
            let value = json!({
                "m": m,
                "sigma": sigma.to_string(),
                "tau": tau.to_string(),
                "rational": wg,
                "evals": evals,
            });
            Ok(Report { value, text, csv: None, violation: None })
        }
        Command::ProjectionCheck { lambda, n, perms, seed } => projection_check(&parse_lambda(&lambda)?, n, perms, seed),
        Command::SpectralGap { n, k, r, seeds, tol, max_iter, csv } => {
            if r == 0 {
                return Err(usage("r must be positive"));
            }
            let config = ExperimentConfig {
                n,
                k,
                r,
                seeds,
                lanczos: LanczosOptions { tolerance: tol / (2 * r) as f64, max_iterations: max_iter, ..Default::default() },
                max_attempts: 8,
            };
            let rows = spectral_experiment(&config).map_err(usage)?;
            let table = csv_table(&rows)?;
            if let Some(path) = csv {
                fs::write(&path, &table).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            let mut text = String::new();
            for row in &rows {
                let lambda = row.lambda_nontrivial.map_or("none".to_string(), |l| format!("{l:.10}"));
                text += &format!(
                    "seed {}: λ = {lambda} (bound {:.10}), {} iterations, residual {:.2e}{}\n",
                    row.seed,
                    row.bound,
                    row.iterations,
                    row.residual,
                    if row.connected { "" } else { ", disconnected" }
                );
            }
            let value = json!({ "rows": to_value(&rows)? });
            Ok(Report { value, text, csv: Some(table), violation: None })
        }
        Command::Regress { criteria } => {
            let ids: Vec<usize> = if criteria.is_empty() { CRITERIA.iter().map(|(id, _)| *id).collect() } else { criteria };
            let reports: Vec<_> = ids.into_iter().map(run_criterion).collect();
            let text: String = reports.iter().map(|r| r.line() + "\n").collect();
            let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
            let value = json!({ "criteria": to_value(&reports)?, "passed": failed.is_empty() });
            let violation = (!failed.is_empty()).then(|| format!("criteria {} failed", failed.join(",")));
            Ok(Report { value, text, csv: None, violation })
        }
    }
}

fn projection_check(lambda: &YoungDiagram, n: usize, perms: u64, seed: u64) -> Result<Report, Failure> {
    let q = build_projection(lambda, n)?;
    let mut checks = serde_json::Map::new();
    checks.insert("idempotent".into(), json!(q.is_idempotent()));
    checks.insert("symmetric".into(), json!(q.is_symmetric()));
    checks.insert("trace".into(), json!(q.trace() == expected_trace(lambda, n)));
    let transposition: Vec<usize> = [1, 0].into_iter().chain(2..n).collect();
    let cycle: Vec<usize> = (1..n).chain([0]).collect();
    checks.insert("commutes".into(), json!(q.commutes_with(&transposition) && q.commutes_with(&cycle)));
    let mut bitrace = true;
    for s in 0..perms {
        let g = random_permutation(n, seed, s);
        bitrace &= q.bitrace(g.images()) == bitrace_character(lambda, g.images(), n)?;
    }
    checks.insert("bitrace".into(), json!(bitrace));
    checks.insert("xi".into(), json!(xi_projector_check(lambda, n)?));
    let failed: Vec<String> = checks.iter().filter(|(_, v)| **v == json!(false)).map(|(k, _)| k.clone()).collect();
    let text: String = checks.iter().map(|(k, v)| format!("{k}: {}\n", if *v == json!(true) { "ok" } else { "FAILED" })).collect();
    let value = json!({
        "lambda": lambda,
        "n": n,
        "trace": format_rational(&q.trace()),
        "checks": checks,
    });
    let violation = (!failed.is_empty()).then(|| format!("projection checks failed: {}", failed.join(", ")));
    Ok(Report { value, text, csv: None, violation })
}

/// Columns: seed,n,k,r,lambda_nontrivial,bound,iterations,connected.
fn csv_table(rows: &[ExperimentRow]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["seed", "n", "k", "r", "lambda_nontrivial", "bound", "iterations", "connected"]).map_err(usage)?;
    for row in rows {
        w.write_record([
            row.seed.to_string(),
            row.n.to_string(),
            row.k.to_string(),
            row.r.to_string(),
            row.lambda_nontrivial.map_or(String::new(), |l| l.to_string()),
            row.bound.to_string(),
            row.iterations.to_string(),
            row.connected.to_string(),
        ])
        .map_err(usage)?;
    }
    let bytes = w.into_inner().map_err(usage)?;
    String::from_utf8(bytes).map_err(usage)
}

//! Implementations of the six subcommands.
//!
//! Data (distributions, sweep tables, stats) goes to standard output or
//! `--out`; progress and summaries go to standard error. Every command
//! returns an error, and therefore a nonzero exit code, when a requested
//! check fails.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, ensure, Context};
use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use patdist::alphabet::{Alphabet, Pattern};
use patdist::bruteforce;
use patdist::daa::{build_cost_daa, Daa};
use patdist::diffdaa::difference_distribution;
use patdist::distribution::{Distribution, MASS_TOLERANCE};
use patdist::matchers::{kmp_distribution, reference, Algorithm, WindowAnalysis};
use patdist::paa::{
    algorithm_distribution, build_paa, cost_distribution, monte_carlo_distribution,
};
use patdist::textmodel::TextModel;

use crate::model::ModelArgs;
use crate::output::{self, Format, Meta};

/// Pointwise tolerance when comparing the automaton pipeline against full
/// enumeration. Both sides accumulate the same products in different orders,
/// so agreement far below this is expected.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

/// Enumeration guard for `verify`: refuse when the largest text level alone
/// has more strings than this.
const ENUMERATION_LIMIT: u128 = 10_000_000;

fn parse_algorithm(tag: &str) -> anyhow::Result<Algorithm> {
    Algorithm::from_str(tag).map_err(anyhow::Error::from)
}

/// Resolves the flags shared by `dist`, `compare`, and `simulate` into a
/// window analysis plus the text model it runs against. The pattern is
/// checked against the model alphabet, which itself must agree with
/// `--alphabet` when that flag is present.
fn build_analysis(
    algorithm: Algorithm,
    pattern: Option<&str>,
    alphabet: Option<&str>,
    model_args: &ModelArgs,
) -> anyhow::Result<(WindowAnalysis, TextModel, String)> {
    let cli_alphabet = alphabet.map(Alphabet::new).transpose()?;
    let (model, model_id) = model_args.resolve(cli_alphabet.as_ref())?;
    let pattern = pattern.ok_or_else(|| anyhow::anyhow!("--pattern is required"))?;
    let pattern = Pattern::parse(pattern, model.alphabet())?;
    let analysis = WindowAnalysis::new(algorithm, pattern, model.alphabet().clone());
    Ok((analysis, model, model_id))
}

// ---------------------------------------------------------------------------
// dist

#[derive(Args, Debug)]
pub struct DistArgs {
    /// Algorithm: horspool, bndm (alias bdm), bom, or kmp
    #[arg(long)]
    pub algo: String,
    /// Pattern over the model alphabet (ignored by kmp)
    #[arg(long)]
    pub pattern: Option<String>,
    /// Alphabet symbols in index order, e.g. ACGT
    #[arg(long)]
    pub alphabet: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Text length
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the distribution to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_dist(args: &DistArgs, state_cap: usize) -> anyhow::Result<()> {
    if args.algo.eq_ignore_ascii_case("kmp") {
        // The linear-time baseline reads every character exactly once, on
        // every text, so the distribution is a point mass independent of the
        // pattern and the model.
        if args.pattern.is_some() || args.model.is_given() {
            eprintln!("note: kmp reads each character exactly once; pattern and model are ignored");
        }
        let dist = kmp_distribution(args.n);
        let meta = Meta {
            algorithm: "kmp",
            algorithm_b: None,
            pattern: args.pattern.as_deref().unwrap_or(""),
            alphabet: args.alphabet.as_deref().unwrap_or(""),
            model: "none",
            n: args.n,
        };
        let payload = output::render(&dist, &meta, args.format, &[])?;
        return output::write_data(args.out.as_ref(), &payload);
    }

    let algorithm = parse_algorithm(&args.algo)?;
    let (analysis, model, model_id) = build_analysis(
        algorithm,
        args.pattern.as_deref(),
        args.alphabet.as_deref(),
        &args.model,
    )?;
    let daa = build_cost_daa(&analysis, state_cap)?;
    let minimized = daa.minimize();
    eprintln!(
        "{} {}: {} reachable states, {} after minimization",
        algorithm,
        model.alphabet().decode(analysis.pattern().symbols()),
        daa.state_count(),
        minimized.state_count()
    );
    let paa = build_paa(&minimized, &model)?;
    let dist = cost_distribution(&paa, args.n);
    report_distribution(&dist, args.n);

    let meta = Meta {
        algorithm: algorithm.name(),
        algorithm_b: None,
        pattern: &model.alphabet().decode(analysis.pattern().symbols()),
        alphabet: &alphabet_string(model.alphabet()),
        model: &model_id,
        n: args.n,
    };
    let payload = output::render(&dist, &meta, args.format, &[])?;
    output::write_data(args.out.as_ref(), &payload)
}

fn alphabet_string(alphabet: &Alphabet) -> String {
    alphabet.symbols().iter().collect()
}

fn report_distribution(dist: &Distribution, n: usize) {
    match (dist.min_value(), dist.max_value()) {
        (Some(lo), Some(hi)) => eprintln!(
            "n {}: mean {:.6}, variance {:.6}, support within [{}, {}]",
            n,
            dist.mean(),
            dist.variance(),
            lo,
            hi
        ),
        _ => eprintln!("n {n}: empty distribution"),
    }
}

// ---------------------------------------------------------------------------
// compare

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// First window algorithm (its cost enters positively)
    #[arg(long)]
    pub algo_a: String,
    /// Second window algorithm (its cost is subtracted)
    #[arg(long)]
    pub algo_b: String,
    /// Pattern over the model alphabet
    #[arg(long)]
    pub pattern: String,
    /// Alphabet symbols in index order
    #[arg(long)]
    pub alphabet: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Text length
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the distribution to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_compare(args: &CompareArgs, state_cap: usize) -> anyhow::Result<()> {
    let algorithm_a = parse_algorithm(&args.algo_a)?;
    let algorithm_b = parse_algorithm(&args.algo_b)?;
    let (analysis_a, model, model_id) = build_analysis(
        algorithm_a,
        Some(&args.pattern),
        args.alphabet.as_deref(),
        &args.model,
    )?;
    // Comparing an algorithm against itself is legal and yields a point mass
    // at zero; it doubles as a quick self-test of the product construction.
    let analysis_b = WindowAnalysis::new(
        algorithm_b,
        analysis_a.pattern().clone(),
        model.alphabet().clone(),
    );
    let summary = difference_distribution(&analysis_a, &analysis_b, &model, args.n, state_cap)?;
    eprintln!(
        "{} vs {} on {}: P(<0) = {:.6}, P(=0) = {:.6}, P(>0) = {:.6}",
        algorithm_a, algorithm_b, args.pattern, summary.p_less, summary.p_equal, summary.p_greater
    );
    report_distribution(&summary.distribution, args.n);

    let meta = Meta {
        algorithm: algorithm_a.name(),
        algorithm_b: Some(algorithm_b.name()),
        pattern: &args.pattern,
        alphabet: &alphabet_string(model.alphabet()),
        model: &model_id,
        n: args.n,
    };
    let extras = [
        ("p_less", json!(summary.p_less)),
        ("p_equal", json!(summary.p_equal)),
        ("p_greater", json!(summary.p_greater)),
    ];
    let payload = output::render(&summary.distribution, &meta, args.format, &extras)?;
    output::write_data(args.out.as_ref(), &payload)
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Alphabet symbols in index order
    #[arg(long)]
    pub alphabet: String,
    /// Pattern length, either one value ("4") or an inclusive range ("2..5")
    #[arg(long)]
    pub m: String,
    /// Algorithms to sweep; repeat the flag for several (default: all)
    #[arg(long = "algo")]
    pub algos: Vec<String>,
    /// Permit pattern lengths of 6 and above
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct SweepRow {
    algorithm: Algorithm,
    m: usize,
    patterns: u64,
    full_space: u128,
    min_states: usize,
    avg_states: f64,
    max_states: usize,
}

fn parse_length_range(spec: &str) -> anyhow::Result<(usize, usize)> {
    let (lo, hi) = match spec.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            (lo.trim().parse()?, hi.trim().parse()?)
        }
        None => {
            let m = spec.trim().parse()?;
            (m, m)
        }
    };
    ensure!(lo >= 1, "pattern length must be at least 1");
    ensure!(lo <= hi, "empty length range {spec}");
    Ok((lo, hi))
}

/// Minimized automaton sizes over every pattern of length `m`. Patterns are
/// enumerated in lexicographic order; the average is summed in integers, so
/// the result does not depend on the parallel schedule.
fn sweep_row(
    algorithm: Algorithm,
    alphabet: &Alphabet,
    m: usize,
    state_cap: usize,
) -> anyhow::Result<SweepRow> {
    let sigma = alphabet.len();
    let count = (sigma as u128)
        .checked_pow(m as u32)
        .filter(|&c| c <= 1 << 24);
    let count = count.with_context(|| format!("too many patterns at m = {m}"))? as u64;
    let sizes: Vec<usize> = (0..count)
        .into_par_iter()
        .map(|index| {
            let mut symbols = vec![0u8; m];
            let mut rest = index;
            for slot in symbols.iter_mut().rev() {
                *slot = (rest % sigma as u64) as u8;
                rest /= sigma as u64;
            }
            let pattern = Pattern::new(symbols, alphabet).expect("symbols are in range");
            let analysis = WindowAnalysis::new(algorithm, pattern, alphabet.clone());
            build_cost_daa(&analysis, state_cap).map(|daa| daa.minimize().state_count())
        })
        .collect::<Result<_, _>>()
        .with_context(|| format!("sweep {algorithm} m = {m}"))?;
    let total: u64 = sizes.iter().map(|&s| s as u64).sum();
    Ok(SweepRow {
        algorithm,
        m,
        patterns: count,
        full_space: Daa::full_state_space(sigma, m).expect("count fits, so this does"),
        min_states: *sizes.iter().min().expect("count >= 1"),
        avg_states: total as f64 / count as f64,
        max_states: *sizes.iter().max().expect("count >= 1"),
    })
}

pub fn cmd_sweep(args: &SweepArgs, state_cap: usize) -> anyhow::Result<()> {
    let alphabet = Alphabet::new(&args.alphabet)?;
    let (m_lo, m_hi) = parse_length_range(&args.m)?;
    if m_hi >= 6 && !args.allow_large {
        bail!(
            "m = {m_hi} enumerates {} patterns; pass --allow-large to proceed",
            (alphabet.len() as u128).pow(m_hi as u32)
        );
    }
    let algorithms: Vec<Algorithm> = if args.algos.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        args.algos
            .iter()
            .map(|tag| parse_algorithm(tag))
            .collect::<anyhow::Result<_>>()?
    };

    let mut rows = Vec::new();
    let mut failure = None;
    'outer: for m in m_lo..=m_hi {
        for &algorithm in &algorithms {
            match sweep_row(algorithm, &alphabet, m, state_cap) {
                Ok(row) => {
                    eprintln!(
                        "{} m={}: min {} avg {:.3} max {} over {} patterns",
                        row.algorithm,
                        row.m,
                        row.min_states,
                        row.avg_states,
                        row.max_states,
                        row.patterns
                    );
                    rows.push(row);
                }
                Err(err) => {
                    failure = Some(err);
                    break 'outer;
                }
            }
        }
    }

    let payload = match args.format {
        Format::Csv => {
            let mut text =
                String::from("algorithm,m,patterns,full_space,min_states,avg_states,max_states\n");
            for row in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{:.3},{}\n",
                    row.algorithm,
                    row.m,
                    row.patterns,
                    row.full_space,
                    row.min_states,
                    row.avg_states,
                    row.max_states
                ));
            }
            text
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "algorithm": row.algorithm.name(),
                        "m": row.m,
                        "patterns": row.patterns,
                        "full_space": row.full_space as u64,
                        "min_states": row.min_states,
                        "avg_states": row.avg_states,
                        "max_states": row.max_states,
                    })
                })
                .collect();
            let doc = json!({ "rows": rows, "partial": failure.is_some() });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    };
    output::write_data(args.out.as_ref(), &payload)?;
    match failure {
        Some(err) => {
            eprintln!("sweep aborted; the table above is partial");
            Err(err)
        }
        None => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Alphabet symbols in index order
    #[arg(long)]
    pub alphabet: String,
    /// Check every pattern up to this length
    #[arg(long, default_value_t = 3)]
    pub max_m: usize,
    /// Check every text length up to this value
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    /// Text model (default: uniform i.i.d. over the alphabet)
    #[command(flatten)]
    pub model: ModelArgs,
}

/// First point where the pipeline and the enumeration oracle disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// Which check failed, e.g. `horspool pattern AC n=7`.
    pub case: String,
    /// Cost (or cost difference) where the probabilities split.
    pub value: i64,
    /// Enumeration result.
    pub expected: f64,
    /// Pipeline result.
    pub got: f64,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: P({}) is {:.12} by enumeration but {:.12} from the automaton",
            self.case, self.value, self.expected, self.got
        )
    }
}

/// Outcome of one verification case.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseOutcome {
    Pass { max_deviation: f64 },
    Fail(Counterexample),
}

fn compare_distributions(
    case: &str,
    oracle: &Distribution,
    pipeline: &Distribution,
) -> CaseOutcome {
    let values: std::collections::BTreeSet<i64> = oracle
        .iter()
        .chain(pipeline.iter())
        .map(|(v, _)| v)
        .collect();
    let mut max_deviation = 0.0f64;
    for v in values {
        let expected = oracle.prob(v);
        let got = pipeline.prob(v);
        let deviation = (expected - got).abs();
        if deviation > VERIFY_TOLERANCE {
            return CaseOutcome::Fail(Counterexample {
                case: case.to_string(),
                value: v,
                expected,
                got,
            });
        }
        max_deviation = max_deviation.max(deviation);
    }
    CaseOutcome::Pass { max_deviation }
}

/// Checks one algorithm and pattern for every text length up to `max_n`: the
/// automaton pipeline built from the analysis tables must reproduce the
/// distribution obtained by running the reference matcher of the *claimed*
/// algorithm over every text. A corrupted table therefore surfaces here even
/// though both sides are derived from the same `WindowAnalysis` value.
pub fn verify_distribution_case(
    analysis: &WindowAnalysis,
    model: &TextModel,
    max_n: usize,
    state_cap: usize,
) -> anyhow::Result<CaseOutcome> {
    let daa = build_cost_daa(analysis, state_cap)?.minimize();
    let paa = build_paa(&daa, model)?;
    let pattern_text = model.alphabet().decode(analysis.pattern().symbols());
    let mut worst = 0.0f64;
    for n in 0..=max_n {
        let mut oracle = Distribution::new();
        bruteforce::for_each_text(model, n, &mut |text, p| {
            let result = reference::by_algorithm(
                analysis.algorithm(),
                analysis.pattern(),
                analysis.alphabet(),
                text,
            );
            oracle.add(result.cost as i64, p);
        });
        let pipeline = cost_distribution(&paa, n);
        let case = format!("{} pattern {} n={}", analysis.algorithm(), pattern_text, n);
        match compare_distributions(&case, &oracle, &pipeline) {
            CaseOutcome::Pass { max_deviation } => worst = worst.max(max_deviation),
            fail => return Ok(fail),
        }
    }
    Ok(CaseOutcome::Pass {
        max_deviation: worst,
    })
}

/// Same cross-check for the cost difference of two analyses over a shared
/// pattern: difference automaton against per-text reference costs.
pub fn verify_difference_case(
    analysis_a: &WindowAnalysis,
    analysis_b: &WindowAnalysis,
    model: &TextModel,
    max_n: usize,
    state_cap: usize,
) -> anyhow::Result<CaseOutcome> {
    let pattern_text = model.alphabet().decode(analysis_a.pattern().symbols());
    let mut worst = 0.0f64;
    for n in 0..=max_n {
        let mut oracle = Distribution::new();
        bruteforce::for_each_text(model, n, &mut |text, p| {
            let a = reference::by_algorithm(
                analysis_a.algorithm(),
                analysis_a.pattern(),
                analysis_a.alphabet(),
                text,
            );
            let b = reference::by_algorithm(
                analysis_b.algorithm(),
                analysis_b.pattern(),
                analysis_b.alphabet(),
                text,
            );
            oracle.add(a.cost as i64 - b.cost as i64, p);
        });
        let summary = difference_distribution(analysis_a, analysis_b, model, n, state_cap)?;
        let case = format!(
            "{} - {} pattern {} n={}",
            analysis_a.algorithm(),
            analysis_b.algorithm(),
            pattern_text,
            n
        );
        match compare_distributions(&case, &oracle, &summary.distribution) {
            CaseOutcome::Pass { max_deviation } => worst = worst.max(max_deviation),
            fail => return Ok(fail),
        }
    }
    Ok(CaseOutcome::Pass {
        max_deviation: worst,
    })
}

/// Every pattern over `alphabet` of length 1 through `max_m`, lexicographic.
fn all_patterns(alphabet: &Alphabet, max_m: usize) -> Vec<Pattern> {
    let sigma = alphabet.len() as u64;
    let mut out = Vec::new();
    for m in 1..=max_m {
        for index in 0..sigma.pow(m as u32) {
            let mut symbols = vec![0u8; m];
            let mut rest = index;
            for slot in symbols.iter_mut().rev() {
                *slot = (rest % sigma) as u8;
                rest /= sigma;
            }
            out.push(Pattern::new(symbols, alphabet).expect("symbols are in range"));
        }
    }
    out
}

pub fn cmd_verify(args: &VerifyArgs, state_cap: usize) -> anyhow::Result<()> {
    let alphabet = Alphabet::new(&args.alphabet)?;
    let model = if args.model.is_given() {
        let (model, id) = args.model.resolve(Some(&alphabet))?;
        eprintln!("verifying against {id}");
        model
    } else {
        TextModel::uniform(&alphabet)
    };
    let texts = bruteforce::enumeration_size(alphabet.len(), args.max_n)
        .filter(|&c| c <= ENUMERATION_LIMIT);
    if texts.is_none() {
        bail!(
            "enumerating {}^{} texts exceeds the limit of {ENUMERATION_LIMIT}; lower --max-n",
            alphabet.len(),
            args.max_n
        );
    }
    ensure!(args.max_m >= 1, "--max-m must be at least 1");

    let patterns = all_patterns(&alphabet, args.max_m);

    // Cost checks: every algorithm on every pattern.
    let mut cost_cases: Vec<(Algorithm, &Pattern)> = Vec::new();
    for &algorithm in &Algorithm::ALL {
        for pattern in &patterns {
            cost_cases.push((algorithm, pattern));
        }
    }
    let cost_outcomes: Vec<CaseOutcome> = cost_cases
        .par_iter()
        .map(|&(algorithm, pattern)| {
            let analysis = WindowAnalysis::new(algorithm, pattern.clone(), alphabet.clone());
            verify_distribution_case(&analysis, &model, args.max_n, state_cap)
        })
        .collect::<anyhow::Result<_>>()?;
    let mut cost_worst = 0.0f64;
    for outcome in &cost_outcomes {
        match outcome {
            CaseOutcome::Pass { max_deviation } => cost_worst = cost_worst.max(*max_deviation),
            CaseOutcome::Fail(cx) => {
                println!("FAIL {cx}");
                bail!("verification failed: {cx}");
            }
        }
    }
    println!(
        "cost: {} cases passed, max deviation {:.3e}",
        cost_outcomes.len(),
        cost_worst
    );

    // Difference checks: every ordered pair of distinct algorithms.
    let mut diff_cases: Vec<(Algorithm, Algorithm, &Pattern)> = Vec::new();
    for &a in &Algorithm::ALL {
        for &b in &Algorithm::ALL {
            if a == b {
                continue;
            }
            for pattern in &patterns {
                diff_cases.push((a, b, pattern));
            }
        }
    }
    let diff_outcomes: Vec<CaseOutcome> = diff_cases
        .par_iter()
        .map(|&(a, b, pattern)| {
            let analysis_a = WindowAnalysis::new(a, pattern.clone(), alphabet.clone());
            let analysis_b = WindowAnalysis::new(b, pattern.clone(), alphabet.clone());
            verify_difference_case(&analysis_a, &analysis_b, &model, args.max_n, state_cap)
        })
        .collect::<anyhow::Result<_>>()?;
    let mut diff_worst = 0.0f64;
    for outcome in &diff_outcomes {
        match outcome {
            CaseOutcome::Pass { max_deviation } => diff_worst = diff_worst.max(*max_deviation),
            CaseOutcome::Fail(cx) => {
                println!("FAIL {cx}");
                bail!("verification failed: {cx}");
            }
        }
    }
    println!(
        "difference: {} cases passed, max deviation {:.3e}",
        diff_outcomes.len(),
        diff_worst
    );
    println!("PASS");
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Window algorithm: horspool, bndm, or bom
    #[arg(long)]
    pub algo: String,
    /// Pattern over the model alphabet
    #[arg(long)]
    pub pattern: String,
    /// Alphabet symbols in index order
    #[arg(long)]
    pub alphabet: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Text length
    #[arg(long)]
    pub n: usize,
    /// Number of sampled texts
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Seed for the deterministic sampler
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also compute the exact distribution and require the empirical mean to
    /// lie within four standard errors of the exact mean
    #[arg(long)]
    pub check: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the empirical distribution to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_simulate(args: &SimulateArgs, state_cap: usize) -> anyhow::Result<()> {
    let algorithm = parse_algorithm(&args.algo)?;
    let (analysis, model, model_id) = build_analysis(
        algorithm,
        Some(&args.pattern),
        args.alphabet.as_deref(),
        &args.model,
    )?;
    ensure!(args.samples > 0, "--samples must be positive");
    let empirical = monte_carlo_distribution(&analysis, &model, args.n, args.samples, args.seed)?;
    eprintln!(
        "{} samples: mean {:.6}, standard error {:.3e}",
        empirical.samples, empirical.mean, empirical.std_error
    );

    let mut extras = vec![
        ("samples", json!(empirical.samples)),
        ("seed", json!(args.seed)),
        ("std_error", json!(empirical.std_error)),
    ];
    if args.check {
        let exact = algorithm_distribution(&analysis, &model, args.n, state_cap)?;
        let z = if empirical.std_error > 0.0 {
            (empirical.mean - exact.mean()) / empirical.std_error
        } else if (empirical.mean - exact.mean()).abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        eprintln!("exact mean {:.6}, z-score {:+.3}", exact.mean(), z);
        extras.push(("z_score", json!(z)));
        if z.abs() > 4.0 {
            // Write nothing: a failed check must not leave plausible output.
            bail!(
                "simulation mean {:.6} is {:.2} standard errors from the exact mean {:.6}",
                empirical.mean,
                z,
                exact.mean()
            );
        }
    }

    let meta = Meta {
        algorithm: algorithm.name(),
        algorithm_b: None,
        pattern: &args.pattern,
        alphabet: &alphabet_string(model.alphabet()),
        model: &model_id,
        n: args.n,
    };
    let payload = output::render(&empirical.distribution, &meta, args.format, &extras)?;
    output::write_data(args.out.as_ref(), &payload)
}

// ---------------------------------------------------------------------------
// stats

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Distribution file in `value,probability` form; "-" or absent reads
    /// standard input
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Comma-separated quantile levels
    #[arg(long, default_value = "0.05,0.25,0.5,0.75,0.95")]
    pub quantiles: String,
    /// Write the report to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_stats(args: &StatsArgs) -> anyhow::Result<()> {
    let dist = output::read_distribution(args.input.as_deref())?;
    ensure!(!dist.is_empty(), "input contains no distribution rows");
    ensure!(
        dist.is_normalized(MASS_TOLERANCE),
        "input is not a probability distribution: total mass {:.12}",
        dist.total_mass()
    );
    let mut levels = Vec::new();
    for part in args.quantiles.split(',') {
        let q: f64 = part
            .trim()
            .parse()
            .with_context(|| format!("bad quantile level '{part}'"))?;
        ensure!(
            (0.0..=1.0).contains(&q),
            "quantile level {q} outside [0, 1]"
        );
        levels.push(q);
    }
    let stats = dist.stats(&levels)?;
    let quantiles: serde_json::Map<String, serde_json::Value> = stats
        .quantiles
        .iter()
        .map(|&(q, v)| (format!("{q}"), json!(v)))
        .collect();
    let doc = json!({
        "mean": stats.mean,
        "variance": stats.variance,
        "min": stats.min,
        "max": stats.max,
        "quantiles": quantiles,
    });
    let payload = format!("{}\n", serde_json::to_string_pretty(&doc)?);
    output::write_data(args.out.as_ref(), &payload)
}

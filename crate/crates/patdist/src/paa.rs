//! Probabilistic arithmetic automata: the product of a cost automaton with
//! a text model, and the forward push that turns it into an exact value
//! distribution.
//!
//! A product state pairs an automaton state q with a model context c. Its
//! transition row aggregates, per successor pair, the model probabilities of
//! all symbols leading there. The push maintains the joint distribution
//! f_t(state, accumulated value) and advances it one text symbol at a time;
//! marginalizing over states after n steps yields the distribution of the
//! automaton's value on a random length-n text.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::daa::{build_cost_daa, Daa, DaaError};
use crate::distribution::{Distribution, MASS_TOLERANCE};
use crate::matchers::{run_matcher, WindowAnalysis};
use crate::textmodel::TextModel;

/// Instance-size guards for the exact-rational certification mode.
pub const EXACT_MAX_N: usize = 20;
pub const EXACT_MAX_STATES: usize = 200;

#[derive(Debug, thiserror::Error)]
pub enum PaaError {
    #[error("automaton alphabet {daa} does not match model alphabet {model}")]
    AlphabetMismatch { daa: String, model: String },
    #[error(
        "exact mode handles n <= {EXACT_MAX_N} and <= {EXACT_MAX_STATES} states, \
         got n = {n} with {states} states"
    )]
    ExactModeOutOfRange { states: usize, n: usize },
    #[error("simulation needs at least one sample")]
    NoSamples,
    #[error(transparent)]
    Daa(#[from] DaaError),
}

/// Product of a cost automaton and a text model, restricted to states
/// reachable from (automaton start, start context). Rows are sparse and
/// aggregated per successor, so models where each (context, symbol) pair has
/// a unique successor cost |alphabet| row entries instead of
/// |alphabet| * |contexts|.
#[derive(Debug, Clone)]
pub struct Paa {
    /// (automaton state, context) label per product state.
    components: Vec<(u32, u32)>,
    emissions: Vec<i64>,
    /// Sorted (successor, probability) rows; each sums to 1 within 1e-9.
    rows: Vec<Vec<(u32, f64)>>,
    start: u32,
}

impl Paa {
    pub fn state_count(&self) -> usize {
        self.emissions.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn emission(&self, state: u32) -> i64 {
        self.emissions[state as usize]
    }

    /// Automaton state and model context a product state stands for.
    pub fn components(&self, state: u32) -> (u32, u32) {
        self.components[state as usize]
    }

    pub fn successors(&self, state: u32) -> &[(u32, f64)] {
        &self.rows[state as usize]
    }
}

/// Builds the reachable product of `daa` and `model`. The transition
/// probability to a successor pair is the sum of model probabilities over
/// all symbols whose automaton transition lands there.
pub fn build_paa(daa: &Daa, model: &TextModel) -> Result<Paa, PaaError> {
    if daa.alphabet() != model.alphabet() {
        return Err(PaaError::AlphabetMismatch {
            daa: daa.alphabet().to_string(),
            model: model.alphabet().to_string(),
        });
    }
    let start_pair = (daa.start(), model.start_context());
    let mut index: BTreeMap<(u32, u32), u32> = BTreeMap::from([(start_pair, 0)]);
    let mut components = vec![start_pair];
    let mut rows: Vec<Vec<(u32, f64)>> = Vec::new();
    let mut frontier = 0usize;
    while frontier < components.len() {
        let (q, c) = components[frontier];
        let mut row: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for &(sym, to, prob) in model.transitions_from(c) {
            *row.entry((daa.successor(q, sym), to)).or_insert(0.0) += prob;
        }
        let mut entries = Vec::with_capacity(row.len());
        let mut sum = 0.0;
        for (pair, prob) in row {
            let next = index.len() as u32;
            let id = *index.entry(pair).or_insert_with(|| {
                components.push(pair);
                next
            });
            entries.push((id, prob));
            sum += prob;
        }
        assert!(
            (sum - 1.0).abs() <= MASS_TOLERANCE,
            "product row for state {frontier} sums to {sum}"
        );
        rows.push(entries);
        frontier += 1;
    }
    let emissions = components.iter().map(|&(q, _)| daa.emission(q)).collect();
    Ok(Paa {
        components,
        emissions,
        rows,
        start: 0,
    })
}

/// Joint state-value tables for one push step. Only the current and next
/// step are ever alive.
type ValueTable = Vec<BTreeMap<i64, f64>>;

/// Exact distribution of the automaton value on a random length-n text:
/// starts from f_0(start, 0) = 1, pushes n steps (each transition adds the
/// entered state's emission), then marginalizes over states. Total mass is
/// asserted to stay 1 within 1e-9 after every step.
pub fn cost_distribution(paa: &Paa, n: usize) -> Distribution {
    let mut f: ValueTable = vec![BTreeMap::new(); paa.state_count()];
    f[paa.start as usize].insert(0, 1.0);
    for step in 0..n {
        let mut next: ValueTable = vec![BTreeMap::new(); paa.state_count()];
        for (q, table) in f.iter().enumerate() {
            if table.is_empty() {
                continue;
            }
            for &(q2, p) in &paa.rows[q] {
                let e = paa.emissions[q2 as usize];
                let target = &mut next[q2 as usize];
                for (&v, &mass) in table {
                    *target.entry(v + e).or_insert(0.0) += mass * p;
                }
            }
        }
        f = next;
        let total: f64 = f.iter().flat_map(|t| t.values()).sum();
        assert!(
            (total - 1.0).abs() <= MASS_TOLERANCE,
            "mass {total} after push step {step}"
        );
    }
    let mut out = Distribution::new();
    for table in &f {
        for (&v, &mass) in table {
            out.add(v, mass);
        }
    }
    out
}

/// Convenience pipeline: cost automaton, minimization, product with the
/// model, push. This is the route every exact query takes.
pub fn algorithm_distribution(
    analysis: &WindowAnalysis,
    model: &TextModel,
    n: usize,
    state_cap: usize,
) -> Result<Distribution, PaaError> {
    let daa = build_cost_daa(analysis, state_cap)?.minimize();
    let paa = build_paa(&daa, model)?;
    Ok(cost_distribution(&paa, n))
}

/// Certification mode: the same push in arbitrary-precision rationals. Row
/// probabilities are taken as the exact binary values of their doubles, so
/// the result bounds the floating-point accumulation error of
/// `cost_distribution` (not the model's own rounding). Guarded to small
/// instances because rational numerators grow with every step.
pub fn exact_cost_distribution(
    paa: &Paa,
    n: usize,
) -> Result<BTreeMap<i64, BigRational>, PaaError> {
    if n > EXACT_MAX_N || paa.state_count() > EXACT_MAX_STATES {
        return Err(PaaError::ExactModeOutOfRange {
            states: paa.state_count(),
            n,
        });
    }
    let rows: Vec<Vec<(u32, BigRational)>> = paa
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(q2, p)| {
                    let exact = BigRational::from_float(p).expect("row probabilities are finite");
                    (q2, exact)
                })
                .collect()
        })
        .collect();
    let mut f: Vec<BTreeMap<i64, BigRational>> = vec![BTreeMap::new(); paa.state_count()];
    f[paa.start as usize].insert(0, BigRational::one());
    for _ in 0..n {
        let mut next: Vec<BTreeMap<i64, BigRational>> = vec![BTreeMap::new(); paa.state_count()];
        for (q, table) in f.iter().enumerate() {
            for (q2, p) in &rows[q] {
                let e = paa.emissions[*q2 as usize];
                let target = &mut next[*q2 as usize];
                for (&v, mass) in table {
                    let add = mass * p;
                    target
                        .entry(v + e)
                        .and_modify(|acc| *acc += &add)
                        .or_insert(add);
                }
            }
        }
        f = next;
    }
    let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
    for table in f {
        for (v, mass) in table {
            out.entry(v).and_modify(|acc| *acc += &mass).or_insert(mass);
        }
    }
    Ok(out)
}

/// Empirical distribution from Monte Carlo simulation.
#[derive(Debug, Clone)]
pub struct Empirical {
    pub distribution: Distribution,
    pub mean: f64,
    /// Standard error of the mean (0 for a single sample).
    pub std_error: f64,
    pub samples: u64,
}

/// Samples `samples` texts of length n from the model, runs the matcher on
/// each, and aggregates costs into an empirical pmf. Deterministic for a
/// fixed seed.
pub fn monte_carlo_distribution(
    analysis: &WindowAnalysis,
    model: &TextModel,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<Empirical, PaaError> {
    if analysis.alphabet() != model.alphabet() {
        return Err(PaaError::AlphabetMismatch {
            daa: analysis.alphabet().to_string(),
            model: model.alphabet().to_string(),
        });
    }
    if samples == 0 {
        return Err(PaaError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let text = model.sample_text(&mut rng, n);
        let cost = run_matcher(analysis, &text).cost as i64;
        *counts.entry(cost).or_insert(0) += 1;
        sum += cost as f64;
        sum_sq += (cost as f64) * (cost as f64);
    }
    let k = samples as f64;
    let mean = sum / k;
    let std_error = if samples > 1 {
        let var = (sum_sq - k * mean * mean) / (k - 1.0);
        (var.max(0.0) / k).sqrt()
    } else {
        0.0
    };
    let distribution = Distribution::from_pairs(counts.into_iter().map(|(v, c)| (v, c as f64 / k)));
    Ok(Empirical {
        distribution,
        mean,
        std_error,
        samples,
    })
}

/// Converts an exact-rational pmf to floats, for comparison against the
/// double-precision pipeline.
pub fn rational_pmf_to_f64(pmf: &BTreeMap<i64, BigRational>) -> Vec<(i64, f64)> {
    pmf.iter()
        .map(|(&v, p)| (v, p.to_f64().expect("pmf values fit in a double")))
        .collect()
}

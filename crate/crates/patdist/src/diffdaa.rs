//! Difference automata: a product machine whose value on a string is the
//! cost difference between two algorithms, and the pipeline that turns it
//! into an exact distribution of that difference on random texts.

use crate::daa::{build_cost_daa, Daa, DaaError};
use crate::distribution::Distribution;
use crate::matchers::WindowAnalysis;
use crate::paa::{build_paa, cost_distribution, PaaError};
use crate::textmodel::TextModel;

#[derive(Debug, thiserror::Error)]
pub enum DiffError {
    #[error("operand alphabets differ: {a} vs {b}")]
    AlphabetMismatch { a: String, b: String },
    #[error("analyses use different patterns: {a} vs {b}")]
    PatternMismatch { a: String, b: String },
    #[error(
        "state {state} has negative emission {emission}; \
         difference operands must be plain cost automata"
    )]
    NegativeEmission { state: u32, emission: i64 },
    #[error(transparent)]
    Daa(#[from] DaaError),
    #[error(transparent)]
    Paa(#[from] PaaError),
}

fn check_nonnegative(daa: &Daa) -> Result<(), DiffError> {
    for (state, &emission) in daa.emissions().iter().enumerate() {
        if emission < 0 {
            return Err(DiffError::NegativeEmission {
                state: state as u32,
                emission,
            });
        }
    }
    Ok(())
}

/// Product automaton over the shared alphabet: state (qa, qb) steps
/// componentwise and emits emission_a(qa) - emission_b(qb), so its value on
/// any string s is value_a(s) - value_b(s). Operands must be cost automata
/// (nonnegative emissions); signed operands would already be differences and
/// stacking them has no interpretation here. Only reachable pairs are built;
/// callers minimize the result before products with a text model.
pub fn build_difference_daa(a: &Daa, b: &Daa) -> Result<Daa, DiffError> {
    if a.alphabet() != b.alphabet() {
        return Err(DiffError::AlphabetMismatch {
            a: a.alphabet().to_string(),
            b: b.alphabet().to_string(),
        });
    }
    check_nonnegative(a)?;
    check_nonnegative(b)?;
    let sigma = a.alphabet().len();
    let mut index = std::collections::BTreeMap::from([((a.start(), b.start()), 0u32)]);
    let mut pairs = vec![(a.start(), b.start())];
    let mut transitions: Vec<u32> = Vec::new();
    let mut frontier = 0usize;
    while frontier < pairs.len() {
        let (qa, qb) = pairs[frontier];
        for sym in 0..sigma as u8 {
            let succ = (a.successor(qa, sym), b.successor(qb, sym));
            let next = index.len() as u32;
            let id = *index.entry(succ).or_insert_with(|| {
                pairs.push(succ);
                next
            });
            transitions.push(id);
        }
        frontier += 1;
    }
    let emissions = pairs
        .iter()
        .map(|&(qa, qb)| a.emission(qa) - b.emission(qb))
        .collect();
    Ok(Daa::from_parts(
        a.alphabet().clone(),
        0,
        transitions,
        emissions,
    ))
}

/// Distribution of cost_a - cost_b plus the three comparison masses.
#[derive(Debug, Clone)]
pub struct DiffSummary {
    pub distribution: Distribution,
    /// P(a strictly cheaper than b).
    pub p_less: f64,
    pub p_equal: f64,
    pub p_greater: f64,
}

/// Exact distribution of the cost difference between two algorithms on the
/// same pattern over a random length-n text. Pipeline: build both cost
/// automata, minimize each, take the difference product, minimize again,
/// cross with the model, push.
pub fn difference_distribution(
    analysis_a: &WindowAnalysis,
    analysis_b: &WindowAnalysis,
    model: &TextModel,
    n: usize,
    state_cap: usize,
) -> Result<DiffSummary, DiffError> {
    if analysis_a.alphabet() != analysis_b.alphabet() {
        return Err(DiffError::AlphabetMismatch {
            a: analysis_a.alphabet().to_string(),
            b: analysis_b.alphabet().to_string(),
        });
    }
    if analysis_a.pattern() != analysis_b.pattern() {
        let show = |w: &WindowAnalysis| w.alphabet().decode(w.pattern().symbols());
        return Err(DiffError::PatternMismatch {
            a: show(analysis_a),
            b: show(analysis_b),
        });
    }
    let daa_a = build_cost_daa(analysis_a, state_cap)?.minimize();
    let daa_b = build_cost_daa(analysis_b, state_cap)?.minimize();
    let diff = build_difference_daa(&daa_a, &daa_b)?.minimize();
    let paa = build_paa(&diff, model)?;
    let distribution = cost_distribution(&paa, n);
    let (p_less, p_equal, p_greater) = (
        distribution.mass_below(0),
        distribution.prob(0),
        distribution.mass_above(0),
    );
    Ok(DiffSummary {
        distribution,
        p_less,
        p_equal,
        p_greater,
    })
}

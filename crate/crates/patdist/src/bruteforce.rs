//! Enumeration oracles: exact distributions computed by summing the matcher
//! cost over every possible text, weighted by the model. Exponential in n,
//! so callers must guard instance sizes; used to validate the automaton
//! pipeline on small cases.

use crate::distribution::Distribution;
use crate::matchers::{run_matcher, WindowAnalysis};
use crate::textmodel::TextModel;

/// Number of texts an enumeration over Σ^n visits, None on overflow.
pub fn enumeration_size(sigma: usize, n: usize) -> Option<u128> {
    (sigma as u128).checked_pow(n.try_into().ok()?)
}

/// Calls `f(text, probability)` for every length-n text, depth-first in
/// lexicographic order. Zero-probability subtrees are pruned, so the visited
/// probabilities sum to 1 (within rounding) regardless of the model.
pub fn for_each_text(model: &TextModel, n: usize, f: &mut impl FnMut(&[u8], f64)) {
    let mut text = Vec::with_capacity(n);
    descend(model, n, &mut text, &model.forward_start(), f);
}

fn descend(
    model: &TextModel,
    n: usize,
    text: &mut Vec<u8>,
    current: &crate::textmodel::ForwardState,
    f: &mut impl FnMut(&[u8], f64),
) {
    if text.len() == n {
        let p = current.total();
        if p > 0.0 {
            f(text, p);
        }
        return;
    }
    for sym in 0..model.alphabet().len() as u8 {
        let next = model.forward_step(current, sym);
        if next.total() == 0.0 {
            continue;
        }
        text.push(sym);
        descend(model, n, text, &next, f);
        text.pop();
    }
}

/// Cost distribution by full enumeration.
pub fn enumerated_cost_distribution(
    analysis: &WindowAnalysis,
    model: &TextModel,
    n: usize,
) -> Distribution {
    let mut out = Distribution::new();
    for_each_text(model, n, &mut |text, p| {
        out.add(run_matcher(analysis, text).cost as i64, p);
    });
    out
}

/// Cost-difference distribution by full enumeration.
pub fn enumerated_difference_distribution(
    analysis_a: &WindowAnalysis,
    analysis_b: &WindowAnalysis,
    model: &TextModel,
    n: usize,
) -> Distribution {
    let mut out = Distribution::new();
    for_each_text(model, n, &mut |text, p| {
        let a = run_matcher(analysis_a, text).cost as i64;
        let b = run_matcher(analysis_b, text).cost as i64;
        out.add(a - b, p);
    });
    out
}

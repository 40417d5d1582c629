//! Straight-line matcher implementations written directly against the
//! textbook procedures. They share no cost or shift code with
//! [`WindowAnalysis`](super::WindowAnalysis) and serve as independent
//! oracles when verifying the automaton pipeline.

use super::backward::BackwardAutomaton;
use super::factor_oracle::FactorOracle;
use super::suffix_automaton::SuffixAutomaton;
use super::{Algorithm, MatchResult};
use crate::alphabet::{Alphabet, Pattern};

/// Horspool with an inline comparison loop and shift table.
pub fn horspool(pattern: &Pattern, alphabet: &Alphabet, text: &[u8]) -> MatchResult {
    let m = pattern.len();
    let p = pattern.symbols();
    let mut ashift = vec![m; alphabet.len()];
    for i in 0..m.saturating_sub(1) {
        ashift[p[i] as usize] = m - 1 - i;
    }

    let mut result = MatchResult::default();
    if text.len() < m {
        return result;
    }
    let mut t = m - 1;
    while t < text.len() {
        let mut i = 0;
        while i < m {
            result.cost += 1;
            if text[t - i] != p[m - 1 - i] {
                break;
            }
            i += 1;
        }
        if i == m {
            result.occurrences += 1;
        }
        t += ashift[text[t] as usize];
    }
    result
}

/// BNDM (equivalently BDM): backward scan with the suffix automaton of the
/// reversed pattern.
pub fn bndm(pattern: &Pattern, text: &[u8]) -> MatchResult {
    let aut = SuffixAutomaton::build(&pattern.reversed());
    backward_match(&aut, pattern.len(), text)
}

/// BOM: backward scan with the factor oracle of the reversed pattern.
pub fn bom(pattern: &Pattern, text: &[u8]) -> MatchResult {
    let aut = FactorOracle::build(&pattern.reversed());
    backward_match(&aut, pattern.len(), text)
}

pub fn by_algorithm(
    algorithm: Algorithm,
    pattern: &Pattern,
    alphabet: &Alphabet,
    text: &[u8],
) -> MatchResult {
    match algorithm {
        Algorithm::Horspool => horspool(pattern, alphabet, text),
        Algorithm::Bndm => bndm(pattern, text),
        Algorithm::Bom => bom(pattern, text),
    }
}

fn backward_match<A: BackwardAutomaton>(aut: &A, m: usize, text: &[u8]) -> MatchResult {
    let mut result = MatchResult::default();
    if text.len() < m {
        return result;
    }
    let mut t = m - 1;
    while t < text.len() {
        let mut state = aut.start();
        let mut last = 0usize;
        let mut i = 0usize;
        let full = loop {
            if i == m {
                break true;
            }
            result.cost += 1;
            match aut.step(state, text[t - i]) {
                None => break false,
                Some(next) => {
                    state = next;
                    i += 1;
                    if i < m && aut.marks_alignment(next) {
                        last = i;
                    }
                }
            }
        };
        if full && aut.is_accepting(state) {
            result.occurrences += 1;
        }
        t += m - last;
    }
    result
}

//! Online factor oracle construction.

use std::collections::BTreeMap;

/// A factor oracle of a word of length m: exactly m + 1 states, state i
/// reached by reading the length-i prefix. It recognizes every factor of the
/// word, possibly more strings. Accepting states are the ones reached by the
/// word's suffixes.
#[derive(Debug, Clone)]
pub struct FactorOracle {
    next: Vec<BTreeMap<u8, usize>>,
    accepting: Vec<bool>,
}

impl FactorOracle {
    /// Builds the factor oracle of `word` (already symbol-encoded).
    pub fn build(word: &[u8]) -> Self {
        let m = word.len();
        let mut next: Vec<BTreeMap<u8, usize>> = vec![BTreeMap::new(); m + 1];
        // supply[i] is the state reached by the longest proper suffix of the
        // length-i prefix that reaches a state smaller than i.
        let mut supply: Vec<Option<usize>> = vec![None; m + 1];

        for i in 1..=m {
            let c = word[i - 1];
            next[i - 1].insert(c, i);
            let mut k = supply[i - 1];
            while let Some(kk) = k {
                if next[kk].contains_key(&c) {
                    break;
                }
                next[kk].insert(c, i);
                k = supply[kk];
            }
            supply[i] = match k {
                None => Some(0),
                Some(kk) => Some(next[kk][&c]),
            };
        }

        // Mark the end state of every suffix of the word; each suffix is a
        // factor, so none of these runs can fail.
        let mut accepting = vec![false; m + 1];
        for j in 0..=m {
            let mut q = 0usize;
            for &c in &word[j..] {
                q = next[q][&c];
            }
            accepting[q] = true;
        }

        FactorOracle { next, accepting }
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    /// One transition; `None` is the FAIL state.
    pub fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        self.next[state].get(&symbol).copied()
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    /// State after reading `s` from the start, or `None` on FAIL.
    pub fn run(&self, s: &[u8]) -> Option<usize> {
        s.iter().try_fold(self.start(), |q, &c| self.step(q, c))
    }
}

//! Online suffix automaton (DAWG) construction.

use std::collections::BTreeMap;

#[derive(Debug, Clone)]
struct State {
    len: usize,
    link: Option<usize>,
    next: BTreeMap<u8, usize>,
}

/// The minimal automaton recognizing all substrings of a word. Accepting
/// states are exactly the states reached by the word's suffixes, including
/// the initial state for the empty suffix.
#[derive(Debug, Clone)]
pub struct SuffixAutomaton {
    states: Vec<State>,
    accepting: Vec<bool>,
}

impl SuffixAutomaton {
    /// Builds the suffix automaton of `word` (already symbol-encoded).
    pub fn build(word: &[u8]) -> Self {
        let mut states = vec![State {
            len: 0,
            link: None,
            next: BTreeMap::new(),
        }];
        let mut last = 0usize;

        for &c in word {
            let cur = states.len();
            states.push(State {
                len: states[last].len + 1,
                link: None,
                next: BTreeMap::new(),
            });
            let mut p = Some(last);
            while let Some(pp) = p {
                if states[pp].next.contains_key(&c) {
                    break;
                }
                states[pp].next.insert(c, cur);
                p = states[pp].link;
            }
            match p {
                None => states[cur].link = Some(0),
                Some(pp) => {
                    let q = states[pp].next[&c];
                    if states[pp].len + 1 == states[q].len {
                        states[cur].link = Some(q);
                    } else {
                        let clone = states.len();
                        states.push(State {
                            len: states[pp].len + 1,
                            link: states[q].link,
                            next: states[q].next.clone(),
                        });
                        let mut r = Some(pp);
                        while let Some(rr) = r {
                            if states[rr].next.get(&c) == Some(&q) {
                                states[rr].next.insert(c, clone);
                                r = states[rr].link;
                            } else {
                                break;
                            }
                        }
                        states[q].link = Some(clone);
                        states[cur].link = Some(clone);
                    }
                }
            }
            last = cur;
        }

        // Suffixes end exactly at the states on the link chain of `last`.
        let mut accepting = vec![false; states.len()];
        let mut s = Some(last);
        while let Some(ss) = s {
            accepting[ss] = true;
            s = states[ss].link;
        }

        SuffixAutomaton { states, accepting }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    /// One transition; `None` is the FAIL state.
    pub fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        self.states[state].next.get(&symbol).copied()
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    /// State after reading `s` from the start, or `None` on FAIL.
    pub fn run(&self, s: &[u8]) -> Option<usize> {
        s.iter().try_fold(self.start(), |q, &c| self.step(q, c))
    }
}

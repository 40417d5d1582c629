//! Right-to-left window simulation shared by the automaton-based matchers.

use super::WindowCost;

/// Interface the window scan needs from a backward automaton. Both the
/// suffix automaton and the factor oracle provide it.
pub(crate) trait BackwardAutomaton {
    fn start(&self) -> usize;
    fn step(&self, state: usize, symbol: u8) -> Option<usize>;
    fn is_accepting(&self, state: usize) -> bool;
    /// Whether reaching this state with fewer than m characters read marks
    /// a viable next window alignment. The suffix automaton knows exactly
    /// when the read suffix is a pattern prefix; the oracle cannot tell and
    /// conservatively anchors at every live state, which makes its shift
    /// the failure position: shift = m + 1 - cost for every window.
    fn marks_alignment(&self, state: usize) -> bool;
}

impl BackwardAutomaton for super::suffix_automaton::SuffixAutomaton {
    fn start(&self) -> usize {
        self.start()
    }
    fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        self.step(state, symbol)
    }
    fn is_accepting(&self, state: usize) -> bool {
        self.is_accepting(state)
    }
    fn marks_alignment(&self, state: usize) -> bool {
        self.is_accepting(state)
    }
}

impl BackwardAutomaton for super::factor_oracle::FactorOracle {
    fn start(&self) -> usize {
        self.start()
    }
    fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        self.step(state, symbol)
    }
    fn is_accepting(&self, state: usize) -> bool {
        self.is_accepting(state)
    }
    fn marks_alignment(&self, _state: usize) -> bool {
        true
    }
}

/// Feeds the window to the automaton right to left. The cost is the number
/// of characters read up to and including the one that hit FAIL (or all m
/// on success); the shift is m minus the largest number of characters
/// i < m that ended in an alignment-marking state.
pub(crate) fn scan_window<A: BackwardAutomaton>(aut: &A, w: &[u8]) -> WindowCost {
    let m = w.len();
    let mut state = aut.start();
    debug_assert!(aut.marks_alignment(state));
    // The empty read always marks, so the shift is at most m.
    let mut deepest_mark = 0usize;
    for i in 0..m {
        match aut.step(state, w[m - 1 - i]) {
            None => {
                return WindowCost {
                    cost: i + 1,
                    shift: m - deepest_mark,
                }
            }
            Some(next) => {
                state = next;
                if i + 1 < m && aut.marks_alignment(next) {
                    deepest_mark = i + 1;
                }
            }
        }
    }
    WindowCost {
        cost: m,
        shift: m - deepest_mark,
    }
}

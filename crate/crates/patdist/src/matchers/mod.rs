//! Window-based pattern matching: per-window cost and shift functions for
//! Horspool, BNDM, and BOM, plus a generic matcher loop driven by them.
//!
//! All three algorithms slide a length-m window over the text. A window is
//! examined at some cost (the number of window characters read) and then the
//! window advances by a shift in 1..=m. Everything downstream, including the
//! cost automata, only depends on these two functions of the window content.

pub mod factor_oracle;
pub mod reference;
pub mod suffix_automaton;

mod backward;
mod horspool;

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{Alphabet, Pattern};
use crate::distribution::Distribution;

use backward::scan_window;
use factor_oracle::FactorOracle;
use suffix_automaton::SuffixAutomaton;

/// The supported window algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Right-to-left comparison, shift by the last window character.
    Horspool,
    /// Backward matching with the suffix automaton of the reversed pattern.
    /// Cost and shift coincide with BDM, so one tag covers both.
    Bndm,
    /// Backward matching with the factor oracle of the reversed pattern.
    Bom,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Horspool, Algorithm::Bndm, Algorithm::Bom];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Horspool => "horspool",
            Algorithm::Bndm => "bndm",
            Algorithm::Bom => "bom",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown algorithm '{0}', expected horspool, bndm (alias bdm), or bom")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "horspool" => Ok(Algorithm::Horspool),
            "bndm" | "bdm" => Ok(Algorithm::Bndm),
            "bom" => Ok(Algorithm::Bom),
            _ => Err(UnknownAlgorithm(s.to_string())),
        }
    }
}

/// Cost and shift of one examined window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowCost {
    /// Window characters read, in 1..=m.
    pub cost: usize,
    /// Window advance, in 1..=m.
    pub shift: usize,
}

type WindowFn = Box<dyn Fn(&[u8]) -> usize + Send + Sync>;

enum Engine {
    Horspool { ashift: Vec<usize> },
    Suffix(SuffixAutomaton),
    Oracle(FactorOracle),
    Custom { cost: WindowFn, shift: WindowFn },
}

/// A pattern prepared for one algorithm: exposes the cost and shift of any
/// window without scanning a concrete text.
pub struct WindowAnalysis {
    algorithm: Algorithm,
    pattern: Pattern,
    alphabet: Alphabet,
    engine: Engine,
}

impl fmt::Debug for WindowAnalysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WindowAnalysis")
            .field("algorithm", &self.algorithm)
            .field("pattern", &self.alphabet.decode(self.pattern.symbols()))
            .finish()
    }
}

impl WindowAnalysis {
    pub fn new(algorithm: Algorithm, pattern: Pattern, alphabet: Alphabet) -> Self {
        match algorithm {
            Algorithm::Horspool => Self::horspool(pattern, alphabet),
            Algorithm::Bndm => Self::bndm(pattern, alphabet),
            Algorithm::Bom => Self::bom(pattern, alphabet),
        }
    }

    pub fn horspool(pattern: Pattern, alphabet: Alphabet) -> Self {
        let ashift = horspool::ashift_table(&pattern, &alphabet);
        WindowAnalysis {
            algorithm: Algorithm::Horspool,
            pattern,
            alphabet,
            engine: Engine::Horspool { ashift },
        }
    }

    pub fn bndm(pattern: Pattern, alphabet: Alphabet) -> Self {
        let aut = SuffixAutomaton::build(&pattern.reversed());
        WindowAnalysis {
            algorithm: Algorithm::Bndm,
            pattern,
            alphabet,
            engine: Engine::Suffix(aut),
        }
    }

    pub fn bom(pattern: Pattern, alphabet: Alphabet) -> Self {
        let aut = FactorOracle::build(&pattern.reversed());
        WindowAnalysis {
            algorithm: Algorithm::Bom,
            pattern,
            alphabet,
            engine: Engine::Oracle(aut),
        }
    }

    /// Wraps arbitrary cost and shift functions under a claimed algorithm
    /// tag. Intended for experiments and for exercising verification
    /// failures; the functions must map length-m windows into 1..=m.
    pub fn custom(
        algorithm: Algorithm,
        pattern: Pattern,
        alphabet: Alphabet,
        cost: impl Fn(&[u8]) -> usize + Send + Sync + 'static,
        shift: impl Fn(&[u8]) -> usize + Send + Sync + 'static,
    ) -> Self {
        WindowAnalysis {
            algorithm,
            pattern,
            alphabet,
            engine: Engine::Custom {
                cost: Box::new(cost),
                shift: Box::new(shift),
            },
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Cost and shift of a window; `w` must have the pattern's length.
    pub fn examine(&self, w: &[u8]) -> WindowCost {
        assert_eq!(w.len(), self.pattern.len(), "window length mismatch");
        match &self.engine {
            Engine::Horspool { ashift } => WindowCost {
                cost: horspool::window_cost(self.pattern.symbols(), w),
                shift: ashift[w[w.len() - 1] as usize],
            },
            Engine::Suffix(aut) => scan_window(aut, w),
            Engine::Oracle(aut) => scan_window(aut, w),
            Engine::Custom { cost, shift } => WindowCost {
                cost: cost(w),
                shift: shift(w),
            },
        }
    }

    pub fn cost(&self, w: &[u8]) -> usize {
        self.examine(w).cost
    }

    pub fn shift(&self, w: &[u8]) -> usize {
        self.examine(w).shift
    }
}

/// Occurrence count and total character accesses of one matcher run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchResult {
    pub occurrences: u64,
    pub cost: u64,
}

/// Runs the window loop on a concrete text: examine the current window, pay
/// its cost, record an occurrence when the window equals the pattern, then
/// advance by the shift. Texts shorter than the pattern cost nothing.
pub fn run_matcher(analysis: &WindowAnalysis, text: &[u8]) -> MatchResult {
    let m = analysis.pattern().len();
    let n = text.len();
    if n < m {
        return MatchResult::default();
    }
    let mut result = MatchResult::default();
    let mut t = m - 1;
    while t < n {
        let w = &text[t + 1 - m..=t];
        let wc = analysis.examine(w);
        result.cost += wc.cost as u64;
        if w == analysis.pattern().symbols() {
            result.occurrences += 1;
        }
        debug_assert!((1..=m).contains(&wc.shift), "shift out of range");
        t += wc.shift;
    }
    result
}

/// Character access distribution of Knuth-Morris-Pratt on any length-n text:
/// it reads each character exactly once, so the distribution is a point mass
/// at n regardless of the text model.
pub fn kmp_distribution(n: usize) -> Distribution {
    Distribution::dirac(n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dna() -> Alphabet {
        Alphabet::new("ACGT").unwrap()
    }

    fn analysis(algorithm: Algorithm, pattern: &str, alphabet: &Alphabet) -> WindowAnalysis {
        let p = Pattern::parse(pattern, alphabet).unwrap();
        WindowAnalysis::new(algorithm, p, alphabet.clone())
    }

    fn all_strings(sigma: u8, len: usize) -> Vec<Vec<u8>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|s| {
                    (0..sigma).map(move |c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn algorithm_parsing() {
        assert_eq!(
            "horspool".parse::<Algorithm>().unwrap(),
            Algorithm::Horspool
        );
        assert_eq!("BNDM".parse::<Algorithm>().unwrap(), Algorithm::Bndm);
        assert_eq!("bdm".parse::<Algorithm>().unwrap(), Algorithm::Bndm);
        assert_eq!("bom".parse::<Algorithm>().unwrap(), Algorithm::Bom);
        assert!("kmp".parse::<Algorithm>().is_err());
    }

    #[test]
    fn horspool_windows_for_ab() {
        let ab = Alphabet::new("AB").unwrap();
        let h = analysis(Algorithm::Horspool, "AB", &ab);
        let enc = |s: &str| ab.encode(s).unwrap();
        assert_eq!(h.examine(&enc("AA")), WindowCost { cost: 1, shift: 1 });
        assert_eq!(h.examine(&enc("AB")), WindowCost { cost: 2, shift: 2 });
        assert_eq!(h.examine(&enc("BB")), WindowCost { cost: 2, shift: 2 });
        assert_eq!(h.examine(&enc("BA")), WindowCost { cost: 1, shift: 1 });
    }

    #[test]
    fn bndm_windows_for_ab() {
        let ab = Alphabet::new("AB").unwrap();
        let b = analysis(Algorithm::Bndm, "AB", &ab);
        let enc = |s: &str| ab.encode(s).unwrap();
        assert_eq!(b.examine(&enc("AA")), WindowCost { cost: 2, shift: 1 });
        assert_eq!(b.examine(&enc("BB")), WindowCost { cost: 2, shift: 2 });
        assert_eq!(b.examine(&enc("AB")), WindowCost { cost: 2, shift: 2 });
        assert_eq!(b.examine(&enc("BA")), WindowCost { cost: 2, shift: 1 });
    }

    #[test]
    fn bom_windows_for_ab() {
        // The oracle cannot tell pattern prefixes from other factors, so its
        // shift is always the failure position: cost + shift = m + 1.
        let ab = Alphabet::new("AB").unwrap();
        let bom = analysis(Algorithm::Bom, "AB", &ab);
        let enc = |s: &str| ab.encode(s).unwrap();
        assert_eq!(bom.examine(&enc("AA")), WindowCost { cost: 2, shift: 1 });
        assert_eq!(bom.examine(&enc("BB")), WindowCost { cost: 2, shift: 1 });
        assert_eq!(bom.examine(&enc("AB")), WindowCost { cost: 2, shift: 1 });
        assert_eq!(bom.examine(&enc("BA")), WindowCost { cost: 2, shift: 1 });
    }

    #[test]
    fn bom_shift_complements_cost() {
        let ab = dna();
        for pattern in ["ACGTAC", "CAAAAA", "ATATAT"] {
            let bom = analysis(Algorithm::Bom, pattern, &ab);
            let m = bom.pattern().len();
            for w in all_strings(4, m).into_iter().step_by(5) {
                let wc = bom.examine(&w);
                assert_eq!(wc.cost + wc.shift, m + 1, "{pattern} {w:?}");
            }
        }
    }

    #[test]
    fn horspool_shift_acgtac() {
        let ab = dna();
        let h = analysis(Algorithm::Horspool, "ACGTAC", &ab);
        let w = ab.encode("ACGTAT").unwrap();
        assert_eq!(h.examine(&w), WindowCost { cost: 1, shift: 2 });
        let w = ab.encode("TTTTTC").unwrap();
        // Last char C occurs rightmost at position 1, so shift 4; the scan
        // matches C then fails on A vs T.
        assert_eq!(h.examine(&w), WindowCost { cost: 2, shift: 4 });
    }

    #[test]
    fn window_invariants_exhaustive() {
        // For every algorithm, pattern, and window over a binary alphabet:
        // cost and shift stay in 1..=m, and the pattern window always costs
        // the full m reads. A failing read also counts, so cost m alone does
        // not certify a match; for Horspool it happens exactly when only the
        // leftmost position may mismatch.
        let ab = Alphabet::new("AC").unwrap();
        for m in 1..=3usize {
            for pat in all_strings(2, m) {
                let pattern = Pattern::new(pat.clone(), &ab).unwrap();
                for algo in Algorithm::ALL {
                    let a = WindowAnalysis::new(algo, pattern.clone(), ab.clone());
                    for w in all_strings(2, m) {
                        let wc = a.examine(&w);
                        assert!((1..=m).contains(&wc.cost), "{algo} {pat:?} {w:?}");
                        assert!((1..=m).contains(&wc.shift), "{algo} {pat:?} {w:?}");
                        if w == pat {
                            assert_eq!(wc.cost, m, "{algo} {pat:?}");
                        }
                        if algo == Algorithm::Horspool {
                            assert_eq!(wc.cost == m, w[1..] == pat[1..], "{pat:?} {w:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_read_without_fail_certifies_match() {
        // Reading all m window characters without hitting FAIL happens only
        // on the pattern itself, for both backward automata.
        let ab = Alphabet::new("AC").unwrap();
        for m in 1..=4usize {
            for pat in all_strings(2, m) {
                let pattern = Pattern::new(pat.clone(), &ab).unwrap();
                let sa = suffix_automaton::SuffixAutomaton::build(&pattern.reversed());
                let fo = factor_oracle::FactorOracle::build(&pattern.reversed());
                for w in all_strings(2, m) {
                    let rev_w: Vec<u8> = w.iter().rev().copied().collect();
                    assert_eq!(sa.run(&rev_w).is_some(), w == pat, "sa {pat:?} {w:?}");
                    assert_eq!(fo.run(&rev_w).is_some(), w == pat, "fo {pat:?} {w:?}");
                }
            }
        }
    }

    #[test]
    fn bom_never_shifts_further_than_bndm() {
        let ab = dna();
        for pattern in ["ACGTAC", "AAAAAA", "ATATAT", "CAAGG"] {
            let bndm = analysis(Algorithm::Bndm, pattern, &ab);
            let bom = analysis(Algorithm::Bom, pattern, &ab);
            let m = bndm.pattern().len();
            // Sampling the full window space is enough here; acceptance
            // covers small alphabets exhaustively.
            for w in all_strings(4, m).into_iter().step_by(7) {
                assert!(bom.shift(&w) <= bndm.shift(&w), "{pattern} {w:?}");
            }
        }
    }

    #[test]
    fn horspool_shift_depends_only_on_last_char() {
        let ab = dna();
        let h = analysis(Algorithm::Horspool, "ACGT", &ab);
        for prefix in all_strings(4, 3) {
            for c in 0..4u8 {
                let mut w1 = prefix.clone();
                w1.push(c);
                let w2 = vec![3, 3, 3, c];
                assert_eq!(h.shift(&w1), h.shift(&w2));
            }
        }
    }

    #[test]
    fn matcher_loop_ab_in_abab() {
        let ab = Alphabet::new("AB").unwrap();
        let text = ab.encode("ABAB").unwrap();
        for algo in [Algorithm::Horspool, Algorithm::Bndm] {
            let a = analysis(algo, "AB", &ab);
            let r = run_matcher(&a, &text);
            assert_eq!(
                r,
                MatchResult {
                    occurrences: 2,
                    cost: 4
                },
                "{algo}"
            );
        }
        // BOM shifts by 1 after each window here, examining BA in between.
        let bom = analysis(Algorithm::Bom, "AB", &ab);
        assert_eq!(
            run_matcher(&bom, &text),
            MatchResult {
                occurrences: 2,
                cost: 6
            }
        );
    }

    #[test]
    fn matcher_loop_aa_in_aaaa() {
        let ab = Alphabet::new("AB").unwrap();
        let text = ab.encode("AAAA").unwrap();
        for algo in Algorithm::ALL {
            let a = analysis(algo, "AA", &ab);
            let r = run_matcher(&a, &text);
            assert_eq!(
                r,
                MatchResult {
                    occurrences: 3,
                    cost: 6
                },
                "{algo}"
            );
        }
    }

    #[test]
    fn short_text_costs_nothing() {
        let ab = dna();
        let a = analysis(Algorithm::Horspool, "ACGT", &ab);
        let text = ab.encode("ACG").unwrap();
        assert_eq!(run_matcher(&a, &text), MatchResult::default());
        assert_eq!(run_matcher(&a, &[]), MatchResult::default());
    }

    #[test]
    fn kmp_is_a_point_mass() {
        let d = kmp_distribution(100);
        assert_eq!(d.len(), 1);
        assert_eq!(d.prob(100), 1.0);
        assert_eq!(d.mean(), 100.0);
        assert_eq!(d.variance(), 0.0);
        let empty = kmp_distribution(0);
        assert_eq!(empty.prob(0), 1.0);
    }

    #[test]
    fn custom_engine_is_used_verbatim() {
        let ab = Alphabet::new("AB").unwrap();
        let p = Pattern::parse("AB", &ab).unwrap();
        let a = WindowAnalysis::custom(Algorithm::Horspool, p, ab.clone(), |_| 1, |_| 2);
        let w = ab.encode("AB").unwrap();
        assert_eq!(a.examine(&w), WindowCost { cost: 1, shift: 2 });
        let text = ab.encode("ABAB").unwrap();
        // Shift 2 everywhere: windows at offsets 1 and 3, each cost 1.
        assert_eq!(
            run_matcher(&a, &text),
            MatchResult {
                occurrences: 2,
                cost: 2
            }
        );
    }
}

//! Deterministic arithmetic automata: DFAs whose states carry an integer
//! emission that is added to a running value on every transition.
//!
//! The cost automaton of a window algorithm has states (w, x) where w is the
//! last m characters read and x counts the characters still missing until
//! the current window ends. States with x = 0 sit at a window end and emit
//! that window's cost; all other states emit zero. Reading a text through
//! the automaton therefore accumulates exactly the matcher's total cost.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::{self, Write};

use crate::alphabet::Alphabet;
use crate::matchers::WindowAnalysis;

/// Default bound on reachable states during construction.
pub const DEFAULT_STATE_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DaaError {
    #[error(
        "window packing needs {needed} bits ({m} symbols at {bits} bits each), only 64 available"
    )]
    PatternTooLong { m: usize, bits: u32, needed: u64 },
    #[error("reachable state count exceeded the cap of {cap}")]
    StateCapExceeded { cap: usize },
}

/// A deterministic arithmetic automaton with addition as the value update:
/// reading a symbol moves to the successor state and adds that successor's
/// emission. The value of the empty string is 0 (the start state's emission
/// is never added). All states are reachable from the start by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Daa {
    alphabet: Alphabet,
    start: u32,
    /// Row-major: `transitions[state * |Σ| + symbol]`.
    transitions: Vec<u32>,
    emissions: Vec<i64>,
}

impl Daa {
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        start: u32,
        transitions: Vec<u32>,
        emissions: Vec<i64>,
    ) -> Self {
        debug_assert_eq!(transitions.len(), emissions.len() * alphabet.len());
        Daa {
            alphabet,
            start,
            transitions,
            emissions,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.emissions.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn emission(&self, state: u32) -> i64 {
        self.emissions[state as usize]
    }

    pub fn emissions(&self) -> &[i64] {
        &self.emissions
    }

    pub fn successor(&self, state: u32, symbol: u8) -> u32 {
        self.transitions[state as usize * self.alphabet.len() + symbol as usize]
    }

    /// Runs the automaton over `s` and returns the accumulated value.
    pub fn value(&self, s: &[u8]) -> i64 {
        let mut q = self.start;
        let mut v = 0i64;
        for &c in s {
            q = self.successor(q, c);
            v += self.emission(q);
        }
        v
    }

    /// Size of the unrestricted state space Σ^m x {0..m} the construction
    /// draws from, before restricting to reachable states.
    pub fn full_state_space(sigma: usize, m: usize) -> Option<u128> {
        (sigma as u128)
            .checked_pow(m as u32)?
            .checked_mul(m as u128 + 1)
    }

    /// Plain-text dump: one line per state (index and emission), then one
    /// line per transition (state, symbol, successor).
    pub fn write_dump(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(
            out,
            "daa states={} alphabet={} start={}",
            self.state_count(),
            self.alphabet,
            self.start
        )?;
        for (i, e) in self.emissions.iter().enumerate() {
            writeln!(out, "state {i} emit {e}")?;
        }
        for state in 0..self.state_count() as u32 {
            for sym in 0..self.alphabet.len() as u8 {
                writeln!(
                    out,
                    "trans {state} {} {}",
                    self.alphabet.symbol(sym),
                    self.successor(state, sym)
                )?;
            }
        }
        Ok(())
    }

    /// The unique smallest automaton (up to state numbering) producing the
    /// same emission sequence as `self` on every input string. Uses
    /// Hopcroft's partition refinement seeded with the emission classes
    /// instead of the accepting/rejecting split, followed by a breadth-first
    /// renumbering that makes the result canonical, so minimizing twice
    /// returns an identical structure.
    pub fn minimize(&self) -> Daa {
        let n = self.state_count();
        let sigma = self.alphabet.len();

        // Inverse transitions in CSR form, indexed by (target, symbol).
        let mut counts = vec![0u32; n * sigma + 1];
        for state in 0..n {
            for sym in 0..sigma {
                let t = self.transitions[state * sigma + sym] as usize;
                counts[t * sigma + sym + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut preds = vec![0u32; n * sigma];
        let mut fill = counts.clone();
        for state in 0..n {
            for sym in 0..sigma {
                let t = self.transitions[state * sigma + sym] as usize;
                preds[fill[t * sigma + sym] as usize] = state as u32;
                fill[t * sigma + sym] += 1;
            }
        }
        let preds_of = |state: usize, sym: usize| {
            &preds[counts[state * sigma + sym] as usize..counts[state * sigma + sym + 1] as usize]
        };

        // Initial partition: states grouped by emission.
        let mut by_emission: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
        for (state, &e) in self.emissions.iter().enumerate() {
            by_emission.entry(e).or_default().push(state as u32);
        }
        let mut blocks: Vec<Vec<u32>> = by_emission.into_values().collect();
        let mut block_of = vec![0u32; n];
        for (b, members) in blocks.iter().enumerate() {
            for &s in members {
                block_of[s as usize] = b as u32;
            }
        }

        // Worklist of (block, symbol) splitters; alphabet fits in a u64
        // bitmask per block.
        let mut queued: Vec<u64> = vec![(1u64 << sigma) - 1; blocks.len()];
        let mut work: VecDeque<(u32, u8)> = (0..blocks.len() as u32)
            .flat_map(|b| (0..sigma as u8).map(move |s| (b, s)))
            .collect();

        let mut marked = vec![false; n];
        while let Some((b, sym)) = work.pop_front() {
            queued[b as usize] &= !(1u64 << sym);
            let splitter = blocks[b as usize].clone();

            // States with a `sym` transition into the splitter, grouped by
            // their current block.
            let mut hits: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for &t in &splitter {
                for &q in preds_of(t as usize, sym as usize) {
                    if !marked[q as usize] {
                        marked[q as usize] = true;
                        hits.entry(block_of[q as usize]).or_default().push(q);
                    }
                }
            }
            for members in hits.values() {
                for &q in members {
                    marked[q as usize] = false;
                }
            }

            for (t, hit) in hits {
                if hit.len() == blocks[t as usize].len() {
                    continue;
                }
                // Split block t into the hit part (new block) and the rest.
                let nb = blocks.len() as u32;
                for &q in &hit {
                    marked[q as usize] = true;
                }
                blocks[t as usize].retain(|&q| !marked[q as usize]);
                for &q in &hit {
                    marked[q as usize] = false;
                    block_of[q as usize] = nb;
                }
                blocks.push(hit);
                queued.push(0);
                for s in 0..sigma as u8 {
                    if queued[t as usize] >> s & 1 == 1 {
                        // (t, s) is still pending and now stands for the
                        // shrunken block; queue the split-off half as well.
                        queued[nb as usize] |= 1 << s;
                        work.push_back((nb, s));
                    } else {
                        // Queueing the smaller half suffices to refine
                        // everything the old block would have.
                        let small = if blocks[t as usize].len() <= blocks[nb as usize].len() {
                            t
                        } else {
                            nb
                        };
                        queued[small as usize] |= 1 << s;
                        work.push_back((small, s));
                    }
                }
            }
        }

        // Quotient with canonical breadth-first numbering from the start.
        let mut new_id = vec![u32::MAX; blocks.len()];
        let mut order: Vec<u32> = Vec::new();
        let start_block = block_of[self.start as usize];
        new_id[start_block as usize] = 0;
        order.push(start_block);
        let mut head = 0;
        while head < order.len() {
            let b = order[head];
            head += 1;
            let rep = blocks[b as usize][0] as usize;
            for sym in 0..sigma {
                let succ = block_of[self.transitions[rep * sigma + sym] as usize];
                if new_id[succ as usize] == u32::MAX {
                    new_id[succ as usize] = order.len() as u32;
                    order.push(succ);
                }
            }
        }

        let mut transitions = vec![0u32; order.len() * sigma];
        let mut emissions = vec![0i64; order.len()];
        for (&b, id) in order.iter().zip(0u32..) {
            let members = &blocks[b as usize];
            let rep = members[0] as usize;
            emissions[id as usize] = self.emissions[rep];
            debug_assert!(members
                .iter()
                .all(|&q| self.emissions[q as usize] == self.emissions[rep]));
            for sym in 0..sigma {
                let succ = block_of[self.transitions[rep * sigma + sym] as usize];
                debug_assert!(members.iter().all(|&q| {
                    block_of[self.transitions[q as usize * sigma + sym] as usize] == succ
                }));
                transitions[id as usize * sigma + sym] = new_id[succ as usize];
            }
        }

        Daa {
            alphabet: self.alphabet.clone(),
            start: 0,
            transitions,
            emissions,
        }
    }
}

/// Builds the cost automaton of one analyzed pattern: the reachable part of
/// the (window, countdown) state space, starting from (p, m). Window labels
/// are packed into a machine word during construction and dropped
/// afterwards.
pub fn build_cost_daa(analysis: &WindowAnalysis, state_cap: usize) -> Result<Daa, DaaError> {
    let m = analysis.pattern().len();
    let alphabet = analysis.alphabet().clone();
    let sigma = alphabet.len();
    let bits = alphabet.bits_per_symbol() as u64;
    let needed = m as u64 * bits;
    if needed > 64 {
        return Err(DaaError::PatternTooLong {
            m,
            bits: bits as u32,
            needed,
        });
    }
    let wmask = if needed == 64 {
        u64::MAX
    } else {
        (1u64 << needed) - 1
    };
    let sym_mask = (1u64 << bits) - 1;
    let pack = |w: &[u8]| w.iter().fold(0u64, |acc, &c| (acc << bits) | c as u64);

    let start_label = (pack(analysis.pattern().symbols()), m);
    let mut index: HashMap<(u64, usize), u32> = HashMap::new();
    index.insert(start_label, 0);
    let mut labels = vec![start_label];
    let mut transitions: Vec<u32> = Vec::new();
    let mut emissions: Vec<i64> = Vec::new();
    let mut window = vec![0u8; m];

    let mut head = 0;
    while head < labels.len() {
        let (wkey, x) = labels[head];
        head += 1;
        for i in 0..m {
            window[m - 1 - i] = (wkey >> (bits * i as u64) & sym_mask) as u8;
        }
        let next_x = if x > 0 {
            emissions.push(0);
            x - 1
        } else {
            let wc = analysis.examine(&window);
            emissions.push(wc.cost as i64);
            wc.shift - 1
        };
        for sym in 0..sigma as u8 {
            let label = ((wkey << bits | sym as u64) & wmask, next_x);
            let id = match index.entry(label) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    if labels.len() >= state_cap {
                        return Err(DaaError::StateCapExceeded { cap: state_cap });
                    }
                    let id = labels.len() as u32;
                    labels.push(label);
                    *e.insert(id)
                }
            };
            transitions.push(id);
        }
    }

    Ok(Daa {
        alphabet,
        start: 0,
        transitions,
        emissions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Pattern;
    use crate::matchers::{run_matcher, Algorithm};

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

    fn strings_up_to(sigma: u8, max_len: usize) -> Vec<Vec<u8>> {
        (0..=max_len).flat_map(|l| all_strings(sigma, l)).collect()
    }

    fn analysis(algo: Algorithm, pattern: &str, alphabet: &str) -> WindowAnalysis {
        let ab = Alphabet::new(alphabet).unwrap();
        let p = Pattern::parse(pattern, &ab).unwrap();
        WindowAnalysis::new(algo, p, ab)
    }

    #[test]
    fn value_of_abab_is_total_cost() {
        let a = analysis(Algorithm::Horspool, "AB", "AB");
        let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap();
        let text = a.alphabet().encode("ABAB").unwrap();
        assert_eq!(daa.value(&text), 4);
        assert_eq!(daa.value(&text), run_matcher(&a, &text).cost as i64);
    }

    #[test]
    fn short_strings_have_value_zero() {
        let a = analysis(Algorithm::Bndm, "ACG", "ACGT");
        let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(daa.value(&[]), 0);
        assert_eq!(daa.value(&[0]), 0);
        assert_eq!(daa.value(&[0, 1]), 0);
    }

    #[test]
    fn matches_matcher_cost_exhaustively() {
        // The automaton value equals the matcher loop cost for every
        // algorithm, every pattern with m <= 3 over a binary alphabet, and
        // every text up to length 10, before and after minimization.
        let ab = Alphabet::new("AC").unwrap();
        let texts = strings_up_to(2, 10);
        for m in 1..=3usize {
            for pat in all_strings(2, m) {
                let pattern = Pattern::new(pat, &ab).unwrap();
                for algo in Algorithm::ALL {
                    let a = WindowAnalysis::new(algo, pattern.clone(), ab.clone());
                    let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap();
                    let min = daa.minimize();
                    for s in &texts {
                        let cost = run_matcher(&a, s).cost as i64;
                        assert_eq!(daa.value(s), cost, "{a:?} {s:?}");
                        assert_eq!(min.value(s), cost, "minimized {a:?} {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn reachable_count_within_full_space() {
        let a = analysis(Algorithm::Bom, "ACGTA", "ACGT");
        let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap();
        let full = Daa::full_state_space(4, 5).unwrap();
        assert!(daa.state_count() as u128 <= full);
        assert!(daa.minimize().state_count() <= daa.state_count());
    }

    #[test]
    fn full_state_space_formula() {
        assert_eq!(Daa::full_state_space(4, 2), Some(48));
        assert_eq!(Daa::full_state_space(4, 3), Some(256));
        assert_eq!(Daa::full_state_space(4, 4), Some(1280));
        assert_eq!(Daa::full_state_space(4, 5), Some(6144));
        assert_eq!(Daa::full_state_space(4, 6), Some(28672));
        assert_eq!(Daa::full_state_space(4, 7), Some(131072));
        assert_eq!(Daa::full_state_space(2, 200), None);
    }

    #[test]
    fn minimized_sizes_horspool_m2_dna() {
        // Over all 16 DNA patterns of length 2 the minimized sizes are
        // min 4, avg 4.8, max 5.
        let ab = Alphabet::new("ACGT").unwrap();
        let mut sizes = Vec::new();
        for pat in all_strings(4, 2) {
            let pattern = Pattern::new(pat, &ab).unwrap();
            let a = WindowAnalysis::horspool(pattern, ab.clone());
            let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap();
            sizes.push(daa.minimize().state_count());
        }
        let min = *sizes.iter().min().unwrap();
        let max = *sizes.iter().max().unwrap();
        let avg = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
        assert_eq!(min, 4);
        assert_eq!(max, 5);
        assert!((avg - 4.8).abs() < 0.05 + 1e-9, "avg {avg}");
    }

    #[test]
    fn minimized_sizes_bom_m4_dna() {
        // Over all 256 DNA patterns of length 4: min 11, avg 15.6, max 18.
        let ab = Alphabet::new("ACGT").unwrap();
        let mut sizes = Vec::new();
        for pat in all_strings(4, 4) {
            let pattern = Pattern::new(pat, &ab).unwrap();
            let a = WindowAnalysis::bom(pattern, ab.clone());
            let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap();
            sizes.push(daa.minimize().state_count());
        }
        let min = *sizes.iter().min().unwrap();
        let max = *sizes.iter().max().unwrap();
        let avg = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
        assert_eq!(min, 11);
        assert_eq!(max, 18);
        assert!((avg - 15.6).abs() < 0.05 + 1e-9, "avg {avg}");
    }

    #[test]
    fn minimize_is_idempotent_and_canonical() {
        for algo in Algorithm::ALL {
            let a = analysis(algo, "ACGTA", "ACGT");
            let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap();
            let once = daa.minimize();
            let twice = once.minimize();
            assert_eq!(once, twice, "{algo}");
        }
    }

    #[test]
    fn minimized_states_are_pairwise_distinguishable() {
        // For every pair of distinct minimized states some string leads to
        // different emissions, otherwise they would have been merged.
        let a = analysis(Algorithm::Horspool, "AAB", "AB");
        let min = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap().minimize();
        let n = min.state_count() as u32;
        let sigma = min.alphabet().len() as u8;
        for q1 in 0..n {
            for q2 in q1 + 1..n {
                // Breadth-first search over state pairs for an emission
                // difference.
                let mut seen = vec![false; (n * n) as usize];
                let mut queue = VecDeque::from([(q1, q2)]);
                seen[(q1 * n + q2) as usize] = true;
                let mut distinguishable = min.emission(q1) != min.emission(q2);
                while let Some((a1, a2)) = queue.pop_front() {
                    if distinguishable {
                        break;
                    }
                    for sym in 0..sigma {
                        let (b1, b2) = (min.successor(a1, sym), min.successor(a2, sym));
                        if min.emission(b1) != min.emission(b2) {
                            distinguishable = true;
                            break;
                        }
                        let key = (b1.min(b2) * n + b1.max(b2)) as usize;
                        if b1 != b2 && !seen[key] {
                            seen[key] = true;
                            queue.push_back((b1, b2));
                        }
                    }
                }
                assert!(distinguishable, "states {q1} and {q2} are equivalent");
            }
        }
    }

    #[test]
    fn state_cap_is_enforced() {
        let a = analysis(Algorithm::Horspool, "ACGTACGT", "ACGT");
        match build_cost_daa(&a, 10) {
            Err(DaaError::StateCapExceeded { cap: 10 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn overlong_pattern_is_rejected() {
        // 33 symbols at 2 bits each need 66 bits.
        let ab = Alphabet::new("ACGT").unwrap();
        let p = Pattern::new(vec![0; 33], &ab).unwrap();
        let a = WindowAnalysis::horspool(p, ab);
        match build_cost_daa(&a, DEFAULT_STATE_CAP) {
            Err(DaaError::PatternTooLong { needed: 66, .. }) => {}
            other => panic!("expected packing error, got {other:?}"),
        }
    }

    #[test]
    fn dump_lists_states_and_transitions() {
        let a = analysis(Algorithm::Horspool, "AA", "AB");
        let daa = build_cost_daa(&a, DEFAULT_STATE_CAP).unwrap().minimize();
        let mut buf = Vec::new();
        daa.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + daa.state_count() + daa.state_count() * 2);
        assert!(lines[0].starts_with("daa states="));
        assert!(lines[1].starts_with("state 0 emit "));
        assert!(lines.iter().any(|l| l.starts_with("trans 0 A ")));
    }
}

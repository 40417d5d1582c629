//! Horspool shift table and window cost.

use crate::alphabet::{Alphabet, Pattern};

/// Shift indexed by the last window character: m minus one minus the
/// rightmost position of that character among the first m - 1 pattern
/// positions, or m when the character does not occur there.
pub(crate) fn ashift_table(pattern: &Pattern, alphabet: &Alphabet) -> Vec<usize> {
    let m = pattern.len();
    let p = pattern.symbols();
    let mut table = vec![m; alphabet.len()];
    for i in 0..m.saturating_sub(1) {
        table[p[i] as usize] = m - 1 - i;
    }
    table
}

/// Number of comparisons made scanning the window right to left: the
/// position (from the right, 1-based) of the first mismatch, or m on a full
/// match.
pub(crate) fn window_cost(p: &[u8], w: &[u8]) -> usize {
    let m = p.len();
    debug_assert_eq!(w.len(), m);
    for i in 1..=m {
        if p[m - i] != w[m - i] {
            return i;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dna() -> Alphabet {
        Alphabet::new("ACGT").unwrap()
    }

    #[test]
    fn shift_table_acgtac() {
        let ab = dna();
        let p = Pattern::parse("ACGTAC", &ab).unwrap();
        let table = ashift_table(&p, &ab);
        // Rightmost occurrences among positions 0..=4: A at 4, C at 1, G at 2,
        // T at 3.
        assert_eq!(table[ab.index_of('A').unwrap() as usize], 1);
        assert_eq!(table[ab.index_of('C').unwrap() as usize], 4);
        assert_eq!(table[ab.index_of('G').unwrap() as usize], 3);
        assert_eq!(table[ab.index_of('T').unwrap() as usize], 2);
    }

    #[test]
    fn shift_for_absent_symbol_is_m() {
        let ab = dna();
        let p = Pattern::parse("AAAA", &ab).unwrap();
        let table = ashift_table(&p, &ab);
        assert_eq!(table[ab.index_of('A').unwrap() as usize], 1);
        assert_eq!(table[ab.index_of('G').unwrap() as usize], 4);
    }

    #[test]
    fn single_symbol_pattern_always_shifts_one() {
        let ab = dna();
        let p = Pattern::parse("C", &ab).unwrap();
        let table = ashift_table(&p, &ab);
        // m = 1 and the loop over the first m - 1 positions is empty, so
        // every entry stays at m = 1.
        assert!(table.iter().all(|&s| s == 1));
    }

    #[test]
    fn cost_counts_right_to_left_comparisons() {
        let ab = dna();
        let p = Pattern::parse("ACGTAC", &ab).unwrap();
        let enc = |s: &str| ab.encode(s).unwrap();
        assert_eq!(window_cost(p.symbols(), &enc("ACGTAC")), 6);
        assert_eq!(window_cost(p.symbols(), &enc("ACGTAT")), 1);
        assert_eq!(window_cost(p.symbols(), &enc("ACGTGC")), 2);
        // Mismatch only at the leftmost position still costs all m reads.
        assert_eq!(window_cost(p.symbols(), &enc("TCGTAC")), 6);
    }
}

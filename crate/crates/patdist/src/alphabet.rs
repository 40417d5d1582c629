//! Alphabets and patterns over dense symbol indices.
//!
//! Every string handled by this crate is first encoded into symbol indices
//! `0..sigma` against a fixed [`Alphabet`]. All automata and models work on
//! indices only; characters reappear when formatting output.

use std::fmt;

use thiserror::Error;

/// Maximum number of symbols. Window contents are packed into a single
/// machine word during automaton construction, which needs
/// `bits_per_symbol * m <= 64`.
pub const MAX_ALPHABET: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must not be empty")]
    Empty,
    #[error("alphabet has at most {MAX_ALPHABET} symbols, got {0}")]
    TooLarge(usize),
    #[error("duplicate symbol {0:?} in alphabet")]
    Duplicate(char),
    #[error("symbol {0:?} not in alphabet")]
    UnknownSymbol(char),
    #[error("pattern must not be empty")]
    EmptyPattern,
    #[error("symbol index {index} out of range for alphabet of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
}

/// An ordered set of distinct symbols; symbol `i` is `symbols()[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet from an ordered string of distinct characters,
    /// e.g. `"ACGT"`.
    pub fn new(symbols: &str) -> Result<Self, AlphabetError> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(AlphabetError::TooLarge(symbols.len()));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(AlphabetError::Duplicate(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    pub fn index_of(&self, c: char) -> Result<u8, AlphabetError> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as u8)
            .ok_or(AlphabetError::UnknownSymbol(c))
    }

    /// Encodes a plain string into symbol indices.
    pub fn encode(&self, s: &str) -> Result<Vec<u8>, AlphabetError> {
        s.chars().map(|c| self.index_of(c)).collect()
    }

    /// Decodes symbol indices back into a string.
    pub fn decode(&self, s: &[u8]) -> String {
        s.iter().map(|&i| self.symbol(i)).collect()
    }

    /// Bits needed to pack one symbol index; at least 1.
    pub fn bits_per_symbol(&self) -> u32 {
        let max_index = (self.symbols.len() - 1) as u64;
        (64 - max_index.leading_zeros()).max(1)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A pattern as a sequence of alphabet indices, length `m >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    symbols: Vec<u8>,
}

impl Pattern {
    pub fn new(symbols: Vec<u8>, alphabet: &Alphabet) -> Result<Self, AlphabetError> {
        if symbols.is_empty() {
            return Err(AlphabetError::EmptyPattern);
        }
        for &s in &symbols {
            if s as usize >= alphabet.len() {
                return Err(AlphabetError::IndexOutOfRange {
                    index: s as usize,
                    size: alphabet.len(),
                });
            }
        }
        Ok(Pattern { symbols })
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, AlphabetError> {
        Pattern::new(alphabet.encode(text)?, alphabet)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// The reversed pattern.
    pub fn reversed(&self) -> Vec<u8> {
        let mut r = self.symbols.clone();
        r.reverse();
        r
    }
}

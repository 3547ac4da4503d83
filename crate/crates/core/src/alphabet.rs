//! Finite ordered alphabets and the words over them.
//!
//! A word is stored as a `Vec<u8>` of alphabet indices, not characters,
//! so that counting and indexing are independent of how symbols are
//! printed. The [`Alphabet`] translates between the two forms.

use crate::error::{Error, Result};

/// A word over an alphabet, stored as 0-based symbol indices.
pub type Word = Vec<u8>;

/// An ordered set of at least two distinct symbols.
///
/// The declared order defines the lexicographic order on words, which in
/// turn fixes how k-mer frequency vectors and rate matrices are laid out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet from distinct symbols in the given order.
    pub fn new(symbols: &[char]) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "alphabet needs at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "alphabet too large ({} symbols)",
                symbols.len()
            )));
        }
        for (i, a) in symbols.iter().enumerate() {
            if symbols[..i].contains(a) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate symbol {a:?} in alphabet"
                )));
            }
        }
        Ok(Self {
            symbols: symbols.to_vec(),
        })
    }

    /// The binary alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Self::new(&['0', '1']).expect("binary alphabet is valid")
    }

    /// The DNA alphabet `{A, C, G, T}`.
    pub fn dna() -> Self {
        Self::new(&['A', 'C', 'G', 'T']).expect("DNA alphabet is valid")
    }

    /// Number of symbols.
    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    /// The symbols in declared order.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Index of a symbol, if it belongs to the alphabet.
    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    /// Printed form of the symbol with the given index.
    ///
    /// Panics if the index is out of range; indices come from words that
    /// were validated on construction.
    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    /// Converts text to a word of symbol indices.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.chars()
            .map(|c| {
                self.index_of(c).ok_or_else(|| {
                    Error::InvalidParameter(format!("symbol {c:?} not in alphabet {self}"))
                })
            })
            .collect()
    }

    /// Converts a word of symbol indices back to text.
    pub fn render_word(&self, word: &[u8]) -> String {
        word.iter().map(|&i| self.symbol(i)).collect()
    }

    /// True if every index in the word is valid for this alphabet.
    pub fn contains_word(&self, word: &[u8]) -> bool {
        word.iter().all(|&i| (i as usize) < self.symbols.len())
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Per-symbol occurrence counts of a word, indexed by symbol index.
pub fn symbol_counts(word: &[u8], alphabet: &Alphabet) -> Vec<u64> {
    let mut counts = vec![0u64; alphabet.size()];
    for &s in word {
        counts[s as usize] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_singleton_and_duplicate_alphabets() {
        assert!(Alphabet::new(&['a']).is_err());
        assert!(Alphabet::new(&['a', 'b', 'a']).is_err());
    }

    #[test]
    fn parse_and_render_round_trip() {
        let dna = Alphabet::dna();
        let w = dna.parse_word("ACGAC").unwrap();
        assert_eq!(w, vec![0, 1, 2, 0, 1]);
        assert_eq!(dna.render_word(&w), "ACGAC");
    }

    #[test]
    fn parse_rejects_foreign_symbols() {
        let bin = Alphabet::binary();
        assert!(bin.parse_word("0102").is_err());
    }

    #[test]
    fn symbol_counts_match_occurrences() {
        let dna = Alphabet::dna();
        let w = dna.parse_word("ACGAC").unwrap();
        assert_eq!(symbol_counts(&w, &dna), vec![2, 2, 1, 0]);
    }
}

//! Circular strings with a recorded origin and reading direction.
//!
//! Positions are taken modulo the length, so position `i` and `i + len`
//! are the same cell. The origin (index 0) is bookkeeping only: every
//! quantity derived here (k-mer counts, mutation statistics) is invariant
//! under rotation, which the tests check explicitly.

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

/// A nonempty circular string over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularString {
    alphabet: Alphabet,
    data: Vec<u8>,
}

impl CircularString {
    /// Wraps a vector of symbol indices as a circular string.
    pub fn new(alphabet: Alphabet, data: Vec<u8>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidParameter(
                "circular string must be nonempty".into(),
            ));
        }
        if !alphabet.contains_word(&data) {
            return Err(Error::InvalidParameter(
                "symbol index out of range for alphabet".into(),
            ));
        }
        Ok(Self { alphabet, data })
    }

    /// Parses text into a circular string over the given alphabet.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let data = alphabet.parse_word(text)?;
        Self::new(alphabet.clone(), data)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced nonempty on construction
    }

    /// Symbol at a position, taken modulo the length.
    pub fn get(&self, pos: usize) -> u8 {
        self.data[pos % self.data.len()]
    }

    /// Linear view of the symbols starting at the origin.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// Reads `len` symbols starting at `start`, wrapping as needed.
    ///
    /// `len` may exceed the string length, in which case the window
    /// traverses the origin more than once.
    pub fn window(&self, start: usize, len: usize) -> Word {
        let n = self.data.len();
        (0..len).map(|j| self.data[(start + j) % n]).collect()
    }

    /// The same circular string read from a different origin.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.data.len();
        let data = (0..n).map(|j| self.data[(j + shift) % n]).collect();
        Self {
            alphabet: self.alphabet.clone(),
            data,
        }
    }

    pub fn render(&self) -> String {
        self.alphabet.render_word(&self.data)
    }

    /// Replaces the symbol at `pos` (mod length) with `symbol`.
    pub fn substitute(&mut self, pos: usize, symbol: u8) -> Result<()> {
        if !self.alphabet.contains_word(&[symbol]) {
            return Err(Error::InvalidParameter(
                "replacement symbol out of range".into(),
            ));
        }
        let n = self.data.len();
        self.data[pos % n] = symbol;
        Ok(())
    }

    /// Copies the block of `len` symbols starting at `start` and inserts
    /// the copy immediately after that block.
    ///
    /// The template may wrap past the origin; the copy is spliced in right
    /// after the template's last symbol, so the result is the circular
    /// string `... template copy ...`.
    pub fn tandem_duplicate(&mut self, start: usize, len: usize) -> Result<()> {
        let n = self.data.len();
        if len == 0 || len >= n {
            return Err(Error::InvalidParameter(format!(
                "tandem duplication length {len} must be in 1..{n}"
            )));
        }
        let start = start % n;
        let copy = self.window(start, len);
        // Linear index just past the template's last symbol.
        let end = start + len;
        let insert_at = if end <= n { end } else { end - n };
        self.data.splice(insert_at..insert_at, copy);
        Ok(())
    }

    /// Inserts a block of symbols at the gap before linear position `gap`.
    ///
    /// Gap `g` (mod length) lies between positions `g - 1` and `g`; gap 0
    /// is the same circular location as the gap after the last symbol.
    pub fn insert_block(&mut self, gap: usize, block: &[u8]) -> Result<()> {
        if !self.alphabet.contains_word(block) {
            return Err(Error::InvalidParameter(
                "inserted block has symbol out of range".into(),
            ));
        }
        let n = self.data.len();
        let gap = gap % n;
        self.data.splice(gap..gap, block.iter().copied());
        Ok(())
    }
}

impl std::fmt::Display for CircularString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dna(text: &str) -> CircularString {
        CircularString::parse(&Alphabet::dna(), text).unwrap()
    }

    #[test]
    fn window_wraps_past_origin() {
        let s = dna("ACGAC");
        assert_eq!(s.alphabet().render_word(&s.window(3, 4)), "ACAC");
    }

    #[test]
    fn window_longer_than_string_wraps_repeatedly() {
        let s = dna("ACG");
        assert_eq!(s.alphabet().render_word(&s.window(1, 7)), "CGACGAC");
    }

    #[test]
    fn substitution_example() {
        // ACGTCT with T -> C at position 3 gives ACGCCT.
        let mut s = dna("ACGTCT");
        s.substitute(3, 1).unwrap();
        assert_eq!(s.render(), "ACGCCT");
    }

    #[test]
    fn tandem_duplication_example() {
        // ACGTCT with template GT (start 2, length 2) gives ACGTGTCT.
        let mut s = dna("ACGTCT");
        s.tandem_duplicate(2, 2).unwrap();
        assert_eq!(s.render(), "ACGTGTCT");
    }

    #[test]
    fn tandem_duplication_wrapping_template() {
        // Template of length 3 starting at the last position of ACGTC
        // reads CAC; the copy lands right after it, two cells in.
        let mut s = dna("ACGTC");
        s.tandem_duplicate(4, 3).unwrap();
        assert_eq!(s.render(), "ACCACGTC");
        // The result must equal the same edit done on a rotation, up to
        // rotation.
        let mut r = dna("ACGTC").rotated(4); // CACGT, template at 0
        r.tandem_duplicate(0, 3).unwrap();
        assert_eq!(r.render(), "CACCACGT");
    }

    #[test]
    fn interspersed_insertion_examples() {
        // AGTTC, copy of AGT inserted at the gap after position 4.
        let mut s = dna("AGTTC");
        let copy = s.window(0, 3);
        s.insert_block(4, &copy).unwrap();
        assert_eq!(s.render(), "AGTTAGTC");

        // AGTTC, copy of AGT inserted inside the template (gap after 2).
        let mut s = dna("AGTTC");
        let copy = s.window(0, 3);
        s.insert_block(2, &copy).unwrap();
        assert_eq!(s.render(), "AGAGTTTC");
    }

    #[test]
    fn insertion_at_gap_zero_matches_gap_len() {
        // Gap 0 and gap len are the same circular location; gap len
        // reduces to 0 modulo the length.
        let mut a = dna("ACGT");
        a.insert_block(0, &[1]).unwrap();
        let mut b = dna("ACGT");
        b.insert_block(4, &[1]).unwrap();
        assert_eq!(a.render(), "CACGT");
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_full_length_duplication() {
        let mut s = dna("ACG");
        assert!(s.tandem_duplicate(0, 3).is_err());
    }
}

//! k-mer indexing, circular counting, and exact frequency vectors.
//!
//! On a circular string of length `L`, every one of the `L` positions
//! starts a k-mer (windows wrap past the origin), so k-mer counts always
//! sum to `L` and frequencies `x^u = count(u) / L` always sum to 1. All
//! vectors are laid out in lexicographic order of the word under the
//! alphabet's declared symbol order.

use num_traits::{One, ToPrimitive, Zero};

use crate::alphabet::{Alphabet, Word};
use crate::circular::CircularString;
use crate::error::{Error, Result};
use crate::form::LinearForm;
use crate::Rational;

/// Lexicographic index of all words of a fixed length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerIndex {
    alphabet: Alphabet,
    k: usize,
    size: usize,
}

impl KmerIndex {
    /// Builds the index of all `|A|^k` words of length `k`.
    pub fn new(alphabet: &Alphabet, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("word length k must be >= 1".into()));
        }
        let size = alphabet
            .size()
            .checked_pow(u32::try_from(k).unwrap_or(u32::MAX))
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "k-mer space {}^{k} is too large to enumerate",
                    alphabet.size()
                ))
            })?;
        Ok(Self {
            alphabet: alphabet.clone(),
            k,
            size,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of indexed words, `|A|^k`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Lexicographic rank of a word of length exactly `k`.
    pub fn encode(&self, word: &[u8]) -> usize {
        debug_assert_eq!(word.len(), self.k);
        let base = self.alphabet.size();
        word.iter().fold(0, |acc, &s| acc * base + s as usize)
    }

    /// Half-open range of codes of all words with the given prefix.
    pub fn prefix_range(&self, prefix: &[u8]) -> Result<(usize, usize)> {
        if prefix.is_empty() || prefix.len() > self.k {
            return Err(Error::InvalidParameter(format!(
                "prefix length must be in 1..={}, got {}",
                self.k,
                prefix.len()
            )));
        }
        let base = self.alphabet.size();
        let rank = prefix.iter().fold(0, |acc, &s| acc * base + s as usize);
        let span = base.pow((self.k - prefix.len()) as u32);
        Ok((rank * span, (rank + 1) * span))
    }

    /// The word with the given lexicographic rank.
    pub fn decode(&self, code: usize) -> Word {
        debug_assert!(code < self.size);
        let base = self.alphabet.size();
        let mut word = vec![0u8; self.k];
        let mut rest = code;
        for slot in word.iter_mut().rev() {
            *slot = (rest % base) as u8;
            rest /= base;
        }
        word
    }

    /// Printed form of the word with the given rank.
    pub fn render(&self, code: usize) -> String {
        self.alphabet.render_word(&self.decode(code))
    }

    /// All codes in lexicographic order.
    pub fn codes(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// Occurrence counts of every k-mer of a circular string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerCounts {
    index: KmerIndex,
    counts: Vec<u64>,
    total: u64,
}

impl KmerCounts {
    pub fn index(&self) -> &KmerIndex {
        &self.index
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Sum of all counts; equals the string length.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, word: &[u8]) -> u64 {
        self.counts[self.index.encode(word)]
    }

    /// Exact frequencies `count / total`.
    pub fn frequencies(&self) -> KmerFrequencies {
        let total = Rational::from_integer(self.total.into());
        let values = self
            .counts
            .iter()
            .map(|&c| Rational::from_integer(c.into()) / total.clone())
            .collect();
        KmerFrequencies {
            index: self.index.clone(),
            values,
        }
    }
}

/// Counts every circular k-mer of `s`.
///
/// Each of the `|s|` positions contributes the window of length `k`
/// starting there; windows wrap, and for `k > |s|` they traverse the
/// origin more than once. Counts therefore sum to `|s|` for every `k`.
pub fn count_kmers(s: &CircularString, k: usize) -> Result<KmerCounts> {
    let index = KmerIndex::new(s.alphabet(), k)?;
    let mut counts = vec![0u64; index.size()];
    let n = s.len();
    let base = s.alphabet().size();
    if k <= n {
        // Rolling code over the doubled string view.
        let span = base.pow((k - 1) as u32);
        let mut code = index.encode(&s.window(0, k));
        for i in 0..n {
            counts[code] += 1;
            // Slide: drop s[i], append s[i + k].
            code = (code - s.get(i) as usize * span) * base + s.get(i + k) as usize;
        }
    } else {
        for i in 0..n {
            counts[index.encode(&s.window(i, k))] += 1;
        }
    }
    Ok(KmerCounts {
        index,
        counts,
        total: n as u64,
    })
}

/// Exact k-mer frequency vector; entries are nonnegative and sum to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerFrequencies {
    index: KmerIndex,
    values: Vec<Rational>,
}

impl KmerFrequencies {
    /// Wraps a vector of exact frequencies, validating nonnegativity and
    /// that the entries sum to exactly 1.
    pub fn from_values(index: KmerIndex, values: Vec<Rational>) -> Result<Self> {
        if values.len() != index.size() {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                index.size(),
                values.len()
            )));
        }
        if values.iter().any(|v| v < &Rational::zero()) {
            return Err(Error::InvalidMeasure("negative frequency entry".into()));
        }
        let sum: Rational = values.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "frequencies sum to {sum}, expected 1"
            )));
        }
        Ok(Self { index, values })
    }

    pub fn index(&self) -> &KmerIndex {
        &self.index
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, word: &[u8]) -> &Rational {
        &self.values[self.index.encode(word)]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Exact circular consistency: for every word `w` of length `k - 1`,
    /// the mass of words starting with `w` equals the mass ending in `w`.
    pub fn is_shift_invariant(&self) -> bool {
        let k = self.index.k();
        if k == 1 {
            return true;
        }
        let base = self.index.alphabet().size();
        let span = base.pow((k - 1) as u32);
        for w in 0..span {
            // Starting with w: codes w*base .. w*base + base.
            let head: Rational = (0..base).map(|a| self.values[w * base + a].clone()).sum();
            // Ending in w: codes a*span + w.
            let tail: Rational = (0..base).map(|a| self.values[a * span + w].clone()).sum();
            if head != tail {
                return false;
            }
        }
        true
    }
}

/// All words at Hamming distance exactly 1 from `u`.
///
/// There are `|u| * (|A| - 1)` of them, all distinct; they are returned
/// ordered by position changed, then by replacement symbol.
pub fn hamming_ball_1(u: &[u8], alphabet: &Alphabet) -> Vec<Word> {
    let mut ball = Vec::with_capacity(u.len() * (alphabet.size() - 1));
    for pos in 0..u.len() {
        for sym in 0..alphabet.size() as u8 {
            if sym != u[pos] {
                let mut v = u.to_vec();
                v[pos] = sym;
                ball.push(v);
            }
        }
    }
    ball
}

/// Expresses the frequency of a short word in the k-mer basis.
///
/// On a circular string, every occurrence of `w` extends to exactly one
/// k-mer starting at the same position, so `x^w` equals the sum of `x^v`
/// over all `v` of length `k` that have `w` as a prefix. The returned
/// form has coefficient 1 on exactly those words.
pub fn lift_to_k(w: &[u8], index: &KmerIndex) -> Result<LinearForm> {
    let (lo, hi) = index.prefix_range(w)?;
    let mut form = LinearForm::zero(index.clone());
    for code in lo..hi {
        form.add_code(code, Rational::one());
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn dna(text: &str) -> CircularString {
        CircularString::parse(&Alphabet::dna(), text).unwrap()
    }

    #[test]
    fn codes_round_trip_exhaustively() {
        for alphabet in [Alphabet::binary(), Alphabet::dna()] {
            for k in 1..=4 {
                let index = KmerIndex::new(&alphabet, k).unwrap();
                for code in index.codes() {
                    assert_eq!(index.encode(&index.decode(code)), code);
                }
            }
        }
    }

    #[test]
    fn encode_is_lexicographic() {
        let index = KmerIndex::new(&Alphabet::dna(), 2).unwrap();
        let mut words: Vec<Word> = index.codes().map(|c| index.decode(c)).collect();
        let sorted = {
            let mut v = words.clone();
            v.sort();
            v
        };
        words.sort_by_key(|w| index.encode(w));
        assert_eq!(words, sorted);
    }

    #[test]
    fn worked_count_example() {
        // ACGAC has two of its five circular 2-mers equal to AC.
        let s = dna("ACGAC");
        let counts = count_kmers(&s, 2).unwrap();
        assert_eq!(counts.get(&[0, 1]), 2);
        assert_eq!(counts.total(), 5);
        let x = counts.frequencies();
        assert_eq!(x.get(&[0, 1]), &rat(2, 5));
    }

    #[test]
    fn counts_sum_to_length_even_for_k_beyond_length() {
        let s = dna("ACG");
        for k in 1..=7 {
            let counts = count_kmers(&s, k).unwrap();
            assert_eq!(counts.counts().iter().sum::<u64>(), 3, "k = {k}");
        }
    }

    #[test]
    fn counting_is_rotation_invariant() {
        let s = dna("ACGTACGGT");
        for k in 1..=5 {
            let reference = count_kmers(&s, k).unwrap();
            for shift in 1..s.len() {
                assert_eq!(count_kmers(&s.rotated(shift), k).unwrap(), reference);
            }
        }
    }

    #[test]
    fn frequencies_are_shift_invariant() {
        for text in ["ACGTACGGT", "AAAT", "ACACAC"] {
            let s = dna(text);
            for k in 1..=4 {
                assert!(count_kmers(&s, k).unwrap().frequencies().is_shift_invariant());
            }
        }
    }

    #[test]
    fn hamming_ball_matches_worked_example() {
        // Neighbors of AC at distance one: CC GC TC AA AG AT.
        let dna = Alphabet::dna();
        let u = dna.parse_word("AC").unwrap();
        let ball: Vec<String> = hamming_ball_1(&u, &dna)
            .iter()
            .map(|w| dna.render_word(w))
            .collect();
        assert_eq!(ball.len(), 6);
        for v in ["CC", "GC", "TC", "AA", "AG", "AT"] {
            assert!(ball.iter().any(|b| b == v), "missing {v}");
        }
    }

    #[test]
    fn lift_evaluates_to_direct_frequency() {
        let s = dna("ACGTACGGTAC");
        for k in 2..=4 {
            let counts = count_kmers(&s, k).unwrap();
            let x = counts.frequencies();
            for wlen in 1..=k {
                let short = count_kmers(&s, wlen).unwrap();
                for code in short.index().codes() {
                    let w = short.index().decode(code);
                    let lifted = lift_to_k(&w, counts.index()).unwrap();
                    assert_eq!(
                        lifted.evaluate(&x).unwrap(),
                        short.frequencies().values()[code],
                        "w = {}, k = {k}",
                        s.alphabet().render_word(&w)
                    );
                }
            }
        }
    }

    #[test]
    fn lift_rejects_overlong_words() {
        let index = KmerIndex::new(&Alphabet::binary(), 2).unwrap();
        assert!(lift_to_k(&[0, 1, 0], &index).is_err());
    }
}

//! Sparse linear forms over a k-mer frequency basis.
//!
//! A [`LinearForm`] represents an expression `sum_v c_v * x^v` with exact
//! rational coefficients, where every `v` has the fixed length of the
//! owning [`KmerIndex`]. Drift formulas are assembled as such forms and
//! then either evaluated on a concrete frequency vector or written as a
//! row of a rate matrix.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kmer::{KmerFrequencies, KmerIndex};
use crate::Rational;

/// A sparse rational linear combination of k-mer frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    index: KmerIndex,
    coeffs: BTreeMap<usize, Rational>,
}

impl LinearForm {
    /// The zero form over the given basis.
    pub fn zero(index: KmerIndex) -> Self {
        Self {
            index,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn index(&self) -> &KmerIndex {
        &self.index
    }

    /// Adds `coeff * x^v` where `v` is the word with the given code.
    pub fn add_code(&mut self, code: usize, coeff: Rational) {
        debug_assert!(code < self.index.size());
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(code).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&code);
        }
    }

    /// Adds `coeff * x^w` for a word of full length `k`.
    pub fn add_word(&mut self, word: &[u8], coeff: Rational) -> Result<()> {
        if word.len() != self.index.k() {
            return Err(Error::InvalidParameter(format!(
                "word length {} does not match basis length {}",
                word.len(),
                self.index.k()
            )));
        }
        self.add_code(self.index.encode(word), coeff);
        Ok(())
    }

    /// Adds `scale` times another form over the same basis.
    pub fn add_scaled(&mut self, other: &LinearForm, scale: &Rational) -> Result<()> {
        if self.index != other.index {
            return Err(Error::InvalidParameter(
                "cannot combine forms over different bases".into(),
            ));
        }
        for (&code, c) in &other.coeffs {
            self.add_code(code, c * scale);
        }
        Ok(())
    }

    /// Coefficient of `x^v` for the word with the given code.
    pub fn coeff(&self, code: usize) -> Rational {
        self.coeffs.get(&code).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in lexicographic order of the word.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(&c, v)| (c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact value of the form on a frequency vector.
    pub fn evaluate(&self, x: &KmerFrequencies) -> Result<Rational> {
        if *x.index() != self.index {
            return Err(Error::InvalidParameter(
                "frequency vector basis does not match form basis".into(),
            ));
        }
        let mut acc = Rational::zero();
        for (&code, c) in &self.coeffs {
            acc += c * &x.values()[code];
        }
        Ok(acc)
    }

    /// Floating-point value of the form on a dense frequency slice.
    pub fn evaluate_f64(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.index.size() {
            return Err(Error::InvalidParameter(
                "frequency slice length does not match basis".into(),
            ));
        }
        let mut acc = 0.0;
        for (&code, c) in &self.coeffs {
            acc += c.to_f64().unwrap_or(f64::NAN) * x[code];
        }
        Ok(acc)
    }

    /// Human-readable rendering such as `2 x^AC - x^CA`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (&code, c)) in self.coeffs.iter().enumerate() {
            let word = self.index.render(code);
            if i == 0 {
                out.push_str(&format!("{c} x^{word}"));
            } else if c < &Rational::zero() {
                out.push_str(&format!(" - {} x^{word}", -c.clone()));
            } else {
                out.push_str(&format!(" + {c} x^{word}"));
            }
        }
        out
    }
}

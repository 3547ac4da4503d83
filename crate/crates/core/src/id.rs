//! Interspersed-duplication drift and its independence limit.
//!
//! Under interspersed duplication the expected one-step change of a
//! word frequency is a polynomial in the frequencies of words no longer
//! than the word itself, so the analysis works with a vector of short-word
//! frequencies rather than a linear operator on fixed-length words. The
//! drift of `x^u` vanishes exactly when frequencies factor into products
//! of symbol frequencies, and the distance from that product form decays
//! at a model-dependent rate, so limiting frequencies look like an
//! independent, identically distributed symbol source.

use std::fmt;

use num_traits::{NumAssign, One, ToPrimitive};
use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::circular::CircularString;
use crate::error::{Error, Result};
use crate::kmer::{count_kmers, KmerIndex};
use crate::model::{ModelKind, MutationModel};
use crate::Rational;

/// Number type the drift polynomials are evaluated in: exact rationals
/// for proofs-by-computation, floats for measured trajectory data.
pub trait Scalar: Clone + NumAssign + PartialEq + fmt::Debug {
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

fn scalar_int<T: Scalar>(n: i64) -> T {
    T::from_rational(&Rational::from_integer(n.into()))
}

/// Frequencies of every word of length 1 to `max_len`, one lexicographic
/// level per length.
#[derive(Debug, Clone)]
pub struct ShortWordVector<T> {
    alphabet: Alphabet,
    levels: Vec<Vec<T>>,
}

impl<T: Scalar> ShortWordVector<T> {
    /// Measures all word frequencies of the circular string up to
    /// `max_len`, exactly, then converts into the scalar type.
    pub fn from_circular(s: &CircularString, max_len: usize) -> Result<Self> {
        if max_len == 0 {
            return Err(Error::InvalidParameter(
                "short-word vectors need max_len at least 1".into(),
            ));
        }
        let mut levels = Vec::with_capacity(max_len);
        for len in 1..=max_len {
            let freqs = count_kmers(s, len)?.frequencies();
            levels.push(freqs.values().iter().map(T::from_rational).collect());
        }
        Ok(ShortWordVector {
            alphabet: s.alphabet().clone(),
            levels,
        })
    }

    /// Builds the product vector of an independent symbol source:
    /// `x^u = product of symbol_values over the symbols of u`.
    pub fn from_symbol_values(
        alphabet: &Alphabet,
        symbol_values: &[T],
        max_len: usize,
    ) -> Result<Self> {
        if symbol_values.len() != alphabet.size() {
            return Err(Error::InvalidParameter(format!(
                "expected {} symbol values, got {}",
                alphabet.size(),
                symbol_values.len()
            )));
        }
        if max_len == 0 {
            return Err(Error::InvalidParameter(
                "short-word vectors need max_len at least 1".into(),
            ));
        }
        let base = alphabet.size();
        let mut levels: Vec<Vec<T>> = vec![symbol_values.to_vec()];
        for _ in 2..=max_len {
            let prev = levels.last().unwrap();
            let mut next = Vec::with_capacity(prev.len() * base);
            for value in prev {
                for sym in symbol_values {
                    next.push(value.clone() * sym.clone());
                }
            }
            levels.push(next);
        }
        Ok(ShortWordVector {
            alphabet: alphabet.clone(),
            levels,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.levels.len()
    }

    /// Frequency of the word `w` (1 <= |w| <= max_len).
    pub fn get(&self, w: &[u8]) -> Result<T> {
        if w.is_empty() || w.len() > self.levels.len() {
            return Err(Error::InvalidParameter(format!(
                "word length {} outside the stored range 1..={}",
                w.len(),
                self.levels.len()
            )));
        }
        let base = self.alphabet.size();
        let mut code = 0usize;
        for &sym in w {
            if sym as usize >= base {
                return Err(Error::InvalidParameter(format!(
                    "symbol id {sym} outside the alphabet"
                )));
            }
            code = code * base + sym as usize;
        }
        Ok(self.levels[w.len() - 1][code].clone())
    }
}

impl ShortWordVector<Rational> {
    /// Verifies the exact marginalization identities a frequency vector
    /// must satisfy: level 1 sums to 1 and every word's frequency equals
    /// the sum of its one-symbol extensions.
    pub fn check_consistency(&self) -> Result<()> {
        let total: Rational = self.levels[0].iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "symbol frequencies sum to {total}, expected 1"
            )));
        }
        let base = self.alphabet.size();
        for len in 1..self.levels.len() {
            let (short, long) = (&self.levels[len - 1], &self.levels[len]);
            for (code, value) in short.iter().enumerate() {
                let extended: Rational = long[code * base..(code + 1) * base].iter().sum();
                if *value != extended {
                    let index = KmerIndex::new(&self.alphabet, len)?;
                    return Err(Error::InvalidMeasure(format!(
                        "extensions of {} sum to {extended}, expected {value}",
                        index.render(code)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Expected one-step change of the count of `u` under an interspersed
/// duplication of length `l`, evaluated on the given word frequencies.
///
/// For `l < |u|` the copy can overlap an occurrence of `u` on one side
/// or sit strictly inside it; each case contributes a product of two
/// word frequencies because template and insertion point are drawn
/// independently. For `l >= |u|` only the boundary terms survive and
/// every interior placement recreates `u` from the template itself,
/// contributing `(l - |u| + 1) x^u`.
pub fn delta_id<T: Scalar>(u: &[u8], l: usize, x: &ShortWordVector<T>) -> Result<T> {
    if l == 0 {
        return Err(Error::InvalidParameter(
            "interspersed events have length at least 1".into(),
        ));
    }
    let w = u.len();
    let mut acc;
    if l < w {
        acc = scalar_int::<T>(-((w as i64) - 1)) * x.get(u)?;
        for i in 1..=l {
            acc += x.get(&u[..i])? * x.get(&u[i..])?;
            acc += x.get(&u[..w - i])? * x.get(&u[w - i..])?;
        }
        for i in 1..=(w - l - 1) {
            let mut outer = u[..i].to_vec();
            outer.extend_from_slice(&u[i + l..]);
            acc += x.get(&outer)? * x.get(&u[i..i + l])?;
        }
    } else {
        acc = scalar_int::<T>(l as i64 - 2 * w as i64 + 2) * x.get(u)?;
        for i in 1..w {
            acc += scalar_int::<T>(2) * x.get(&u[..i])? * x.get(&u[i..])?;
        }
    }
    Ok(acc)
}

/// Drift of the frequency of `u`: the expected change of `x^u` per step,
/// to leading order in `1/|s|`, under the model's length distribution.
/// Each length contributes its count drift minus `l x^u` for the length
/// the string itself gains.
pub fn h_id<T: Scalar>(u: &[u8], model: &MutationModel, x: &ShortWordVector<T>) -> Result<T> {
    if model.kind() != ModelKind::Id {
        return Err(Error::InvalidParameter(
            "frequency drift in this form applies to interspersed models only".into(),
        ));
    }
    let mut acc = T::zero();
    for l in model.support() {
        let weight = T::from_rational(&model.q_at(l));
        let drift = delta_id(u, l, x)? - scalar_int::<T>(l as i64) * x.get(u)?;
        acc += weight * drift;
    }
    Ok(acc)
}

/// Rate at which the drift pulls `x^u` toward its product form: the
/// coefficient of `-x^u` once all product terms are frozen. Equals
/// `2(|u| - 1) - sum over l < |u| of q_l (|u| - 1 - l)`, which is at
/// least `|u|` for every length distribution, so the pull never
/// degenerates.
pub fn decay_constant(word_len: usize, model: &MutationModel) -> Result<Rational> {
    if model.kind() != ModelKind::Id {
        return Err(Error::InvalidParameter(
            "decay constants in this form apply to interspersed models only".into(),
        ));
    }
    if word_len < 2 {
        return Err(Error::InvalidParameter(
            "decay constants are defined for words of length at least 2".into(),
        ));
    }
    let w = word_len as i64;
    let mut c = Rational::from_integer((2 * (w - 1)).into());
    for l in model.support() {
        if l < word_len {
            c -= model.q_at(l) * Rational::from_integer((w - 1 - l as i64).into());
        }
    }
    Ok(c)
}

/// Product of symbol frequencies over the symbols of `u` — the value
/// `x^u` takes for an independent symbol source.
pub fn iid_product<T: Scalar>(u: &[u8], symbol_values: &[T]) -> Result<T> {
    if u.is_empty() {
        return Err(Error::InvalidParameter("empty word".into()));
    }
    let mut acc = T::one();
    for &sym in u {
        let value = symbol_values
            .get(sym as usize)
            .ok_or_else(|| Error::InvalidParameter(format!("symbol id {sym} out of range")))?;
        acc *= value.clone();
    }
    Ok(acc)
}

/// One word's measured frequency next to the product of its symbol
/// frequencies.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationRow {
    pub word: String,
    pub observed: f64,
    pub product: f64,
    pub deviation: f64,
}

/// How far a measured frequency vector is from independent-symbol form,
/// word by word and in aggregate.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationReport {
    pub rows: Vec<DeviationRow>,
    /// Largest deviation among words of each length (length, value).
    pub max_by_length: Vec<(usize, f64)>,
    pub max_deviation: f64,
    pub mean_deviation: f64,
}

/// Compares every stored word frequency of length 2 and up against the
/// product of the measured symbol frequencies.
pub fn iid_deviation(x: &ShortWordVector<f64>) -> Result<DeviationReport> {
    if x.max_len() < 2 {
        return Err(Error::InvalidParameter(
            "deviation reports need words of length at least 2".into(),
        ));
    }
    let symbol_values: Vec<f64> = (0..x.alphabet().size() as u8)
        .map(|sym| x.get(&[sym]))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut max_by_length = Vec::new();
    for len in 2..=x.max_len() {
        let index = KmerIndex::new(x.alphabet(), len)?;
        let mut level_max = 0.0f64;
        for code in index.codes() {
            let word = index.decode(code);
            let observed = x.get(&word)?;
            let product = iid_product(&word, &symbol_values)?;
            let deviation = (observed - product).abs();
            level_max = level_max.max(deviation);
            rows.push(DeviationRow {
                word: index.render(code),
                observed,
                product,
                deviation,
            });
        }
        max_by_length.push((len, level_max));
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let mean_deviation = rows.iter().map(|r| r.deviation).sum::<f64>() / rows.len() as f64;
    Ok(DeviationReport {
        rows,
        max_by_length,
        max_deviation,
        mean_deviation,
    })
}

//! Entropy upper bounds from limiting word frequencies.
//!
//! A shift-invariant frequency vector on words of length k pins down the
//! admissible word-composition of long strings, and the exponential
//! growth rate of the number of such strings — the capacity of the
//! constrained set — is an explicit single-letter expression: the
//! conditional entropy of the last symbol given the preceding k-1, in
//! base |A|. Evaluated at the limiting frequencies of a mutation model,
//! it upper-bounds the entropy rate of the strings the model produces,
//! and refines (never worsens) as k grows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kmer::{KmerFrequencies, KmerIndex};
use crate::model::{ModelKind, MutationModel};
use crate::nullspace::null_space_limit;
use crate::tds::build_rate_matrix;
use crate::{rat, Rational};

/// A shift-invariant frequency vector on fixed-length words, the data
/// defining a word-composition constraint.
#[derive(Debug, Clone)]
pub struct SemiconstrainedMeasure {
    freqs: KmerFrequencies,
}

impl SemiconstrainedMeasure {
    /// Wraps a frequency vector, requiring exact shift-invariance
    /// (head and tail marginals agree) on top of the nonnegativity and
    /// normalization the vector itself guarantees.
    pub fn new(freqs: KmerFrequencies) -> Result<Self> {
        if !freqs.is_shift_invariant() {
            return Err(Error::InvalidMeasure(
                "frequency vector is not shift-invariant".into(),
            ));
        }
        Ok(SemiconstrainedMeasure { freqs })
    }

    pub fn k(&self) -> usize {
        self.freqs.index().k()
    }

    pub fn frequencies(&self) -> &KmerFrequencies {
        &self.freqs
    }

    /// The induced measure on words one symbol shorter, summing over the
    /// last symbol. Shift-invariance transfers to the marginal.
    pub fn marginalize(&self) -> Result<SemiconstrainedMeasure> {
        let index = self.freqs.index();
        if index.k() < 2 {
            return Err(Error::InvalidParameter(
                "cannot marginalize single-symbol measures".into(),
            ));
        }
        let base = index.alphabet().size();
        let short_index = KmerIndex::new(index.alphabet(), index.k() - 1)?;
        let values: Vec<Rational> = short_index
            .codes()
            .map(|code| {
                self.freqs.values()[code * base..(code + 1) * base]
                    .iter()
                    .sum()
            })
            .collect();
        SemiconstrainedMeasure::new(KmerFrequencies::from_values(short_index, values)?)
    }
}

fn log_base(value: f64, base: usize) -> f64 {
    value.ln() / (base as f64).ln()
}

/// Capacity of the constrained set: the exponential growth rate, in
/// base-|A| digits per symbol, of the number of strings whose length-k
/// word composition matches the measure. Computed as
/// `-sum over u of m(u) log(m(u) / m'(prefix(u)))` where `m'` is the
/// (k-1)-marginal, with `0 log 0 = 0`. For k = 1 this is the plain
/// entropy of the symbol frequencies.
pub fn cap_singleton(measure: &SemiconstrainedMeasure) -> Result<f64> {
    let index = measure.frequencies().index();
    let base = index.alphabet().size();
    let values = measure.frequencies().to_f64();
    if index.k() == 1 {
        let mut h = 0.0;
        for &v in &values {
            if v > 0.0 {
                h -= v * log_base(v, base);
            }
        }
        return Ok(h);
    }
    let marginal = measure.marginalize()?;
    let prefix_values = marginal.frequencies().to_f64();
    let mut h = 0.0;
    for (code, &v) in values.iter().enumerate() {
        if v > 0.0 {
            let p = prefix_values[code / base];
            h -= v * log_base(v / p, base);
        }
    }
    Ok(h)
}

/// One refinement step of the entropy bound chain.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyRow {
    pub k: usize,
    pub nullity: usize,
    /// Capacity of the order-k constraint at the limiting frequencies;
    /// absent when the limit is not unique at this order.
    pub cap: Option<f64>,
}

/// The entropy bound evaluated at successive word lengths.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub model: String,
    pub alphabet: String,
    pub rows: Vec<EntropyRow>,
}

impl EntropyReport {
    /// The tightest bound established (the last available cap, since the
    /// chain is nonincreasing).
    pub fn best(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.cap).last()
    }
}

/// Computes the limiting frequencies of a tandem model at each word
/// length from the model's support bound up to `k_max` and evaluates the
/// capacity at each, verifying along the way that the chain of bounds
/// never increases (beyond float jitter).
pub fn bound_chain(
    model: &MutationModel,
    alphabet: &crate::alphabet::Alphabet,
    k_max: usize,
) -> Result<EntropyReport> {
    if model.kind() != ModelKind::Tds {
        return Err(Error::InvalidParameter(
            "entropy bound chains require a tandem model; interspersed limits \
             are product measures with a directly computable entropy"
                .into(),
        ));
    }
    let k_min = model.support_bound();
    if k_max < k_min {
        return Err(Error::InvalidParameter(format!(
            "k_max = {k_max} is below the smallest analyzable word length {k_min}"
        )));
    }
    let mut rows = Vec::new();
    let mut previous: Option<f64> = None;
    for k in k_min..=k_max {
        let index = KmerIndex::new(alphabet, k)?;
        let matrix = build_rate_matrix(model, &index)?;
        let limit = null_space_limit(&matrix)?;
        let cap = match &limit.stationary {
            Some(freqs) => {
                let measure = SemiconstrainedMeasure::new(freqs.clone())?;
                let value = cap_singleton(&measure)?;
                if let Some(prev) = previous {
                    if value > prev + 1e-12 {
                        return Err(Error::Internal(format!(
                            "entropy bound increased from {prev} to {value} at k = {k}"
                        )));
                    }
                }
                previous = Some(value);
                Some(value)
            }
            None => None,
        };
        rows.push(EntropyRow {
            k,
            nullity: limit.nullity,
            cap,
        });
    }
    Ok(EntropyReport {
        model: model.describe(),
        alphabet: alphabet.to_string(),
        rows,
    })
}

/// Entropy bound for the binary model with substitutions and tandem
/// duplications of lengths 1 and 2 (`q = [1 - a - b, a, b]`) at word
/// length `k`, or `None` when the limit is not unique there. The inputs
/// are dyadic floats and are converted exactly.
pub fn bound_surface(a: f64, b: f64, k: usize) -> Result<Option<f64>> {
    let alpha = Rational::from_float(a)
        .ok_or_else(|| Error::InvalidParameter(format!("a = {a} is not a finite number")))?;
    let beta = Rational::from_float(b)
        .ok_or_else(|| Error::InvalidParameter(format!("b = {b} is not a finite number")))?;
    let (zero, one) = (rat(0, 1), rat(1, 1));
    if alpha < zero || beta < zero || &alpha + &beta > one {
        return Err(Error::InvalidParameter(format!(
            "duplication probabilities a = {a}, b = {b} must be nonnegative with a + b <= 1"
        )));
    }
    let q0 = &one - &alpha - &beta;
    let model = MutationModel::tds(vec![q0, alpha, beta])?;
    let alphabet = crate::alphabet::Alphabet::binary();
    let index = KmerIndex::new(&alphabet, k.max(model.support_bound()))?;
    let matrix = build_rate_matrix(&model, &index)?;
    let limit = null_space_limit(&matrix)?;
    match &limit.stationary {
        Some(freqs) => {
            let measure = SemiconstrainedMeasure::new(freqs.clone())?;
            Ok(Some(cap_singleton(&measure)?))
        }
        None => Ok(None),
    }
}

/// Binary entropy of `p`, in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "binary entropy needs a probability, got {p}"
        )));
    }
    let mut h = 0.0;
    for v in [p, 1.0 - p] {
        if v > 0.0 {
            h -= v * v.log2();
        }
    }
    Ok(h)
}

fn harmonic(n: u64) -> f64 {
    // Summing smallest terms first keeps the float error negligible.
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

/// Exact entropy rate, in bits per symbol, of the binary
/// single-symbol-duplication process started from `t0` zeros and `t1`
/// ones: `log2(e) / (t0 + t1) * ((t0 + t1) H_{t0+t1} - t0 H_{t0} - t1 H_{t1})`
/// with `H_n` the n-th harmonic number. Duplicating single symbols only
/// reorders run lengths, so this sequence entropy is computable in closed
/// form and calibrates how loose the trivial word-composition bound is.
pub fn id_binary_len1_entropy(t0: u64, t1: u64) -> Result<f64> {
    if t0 == 0 || t1 == 0 {
        return Err(Error::InvalidParameter(
            "both symbols must appear in the starting string".into(),
        ));
    }
    let t = t0 + t1;
    let value = std::f64::consts::LOG2_E / t as f64
        * (t as f64 * harmonic(t) - t0 as f64 * harmonic(t0) - t1 as f64 * harmonic(t1));
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::kmer::count_kmers;

    fn uniform_measure(alphabet: &Alphabet, k: usize) -> SemiconstrainedMeasure {
        let index = KmerIndex::new(alphabet, k).unwrap();
        let n = index.size() as i64;
        let values = vec![rat(1, n); index.size()];
        SemiconstrainedMeasure::new(KmerFrequencies::from_values(index, values).unwrap()).unwrap()
    }

    #[test]
    fn uniform_measures_have_unit_capacity() {
        for k in 1..=3 {
            let m = uniform_measure(&Alphabet::binary(), k);
            assert!((cap_singleton(&m).unwrap() - 1.0).abs() < 1e-15);
        }
        let m = uniform_measure(&Alphabet::dna(), 2);
        assert!((cap_singleton(&m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_shift_invariant_vectors_are_rejected() {
        let index = KmerIndex::new(&Alphabet::binary(), 2).unwrap();
        let values = vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)];
        let freqs = KmerFrequencies::from_values(index, values).unwrap();
        assert!(SemiconstrainedMeasure::new(freqs).is_err());
    }

    #[test]
    fn marginal_of_pair_measure_is_symbol_measure() {
        // Stationary pair frequencies of the uniform-substitution +
        // single-duplication binary model at a = 1/4.
        let index = KmerIndex::new(&Alphabet::binary(), 2).unwrap();
        let values = vec![rat(5, 14), rat(2, 14), rat(2, 14), rat(5, 14)];
        let m = SemiconstrainedMeasure::new(
            KmerFrequencies::from_values(index, values).unwrap(),
        )
        .unwrap();
        let marginal = m.marginalize().unwrap();
        assert_eq!(marginal.frequencies().values(), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn pair_capacity_matches_conditional_entropy_closed_form() {
        // For the binary pair measure ((1+a)/d, 2a/d, 2a/d, (1+a)/d)
        // with d = 2(1+3a), the capacity is H2(2a / (1 + 3a)).
        for num in 1..=10i64 {
            let a = rat(num, 10);
            let d = rat(2, 1) * (rat(1, 1) + rat(3, 1) * a.clone());
            let same = (rat(1, 1) + a.clone()) / d.clone();
            let cross = rat(2, 1) * a.clone() / d;
            let index = KmerIndex::new(&Alphabet::binary(), 2).unwrap();
            let values = vec![same.clone(), cross.clone(), cross.clone(), same];
            let m = SemiconstrainedMeasure::new(
                KmerFrequencies::from_values(index, values).unwrap(),
            )
            .unwrap();
            let p = 2.0 * num as f64 / 10.0 / (1.0 + 3.0 * num as f64 / 10.0);
            assert!(
                (cap_singleton(&m).unwrap() - binary_entropy(p).unwrap()).abs() < 1e-12,
                "mismatch at a = {num}/10"
            );
        }
    }

    #[test]
    fn zero_frequencies_contribute_nothing() {
        // All-A measure: capacity 0, no NaN from the 0 log 0 terms.
        let s = crate::circular::CircularString::parse(&Alphabet::dna(), "AAAA").unwrap();
        let freqs = count_kmers(&s, 2).unwrap().frequencies();
        let m = SemiconstrainedMeasure::new(freqs).unwrap();
        let cap = cap_singleton(&m).unwrap();
        assert_eq!(cap, 0.0);
    }

    #[test]
    fn bound_chain_is_nonincreasing_and_matches_pair_formula() {
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let report = bound_chain(&model, &Alphabet::binary(), 4).unwrap();
        assert_eq!(report.rows.len(), 3);
        // k = 2 row agrees with H2(2a / (1 + 3a)) at substitution
        // probability a = 1/4.
        let first = report.rows[0].cap.unwrap();
        assert!((first - binary_entropy(2.0 / 7.0).unwrap()).abs() < 1e-12);
        let caps: Vec<f64> = report.rows.iter().map(|r| r.cap.unwrap()).collect();
        for pair in caps.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
        assert_eq!(report.best(), report.rows.last().unwrap().cap);
    }

    #[test]
    fn pure_duplication_chain_reports_nonunique_limits() {
        let model = MutationModel::tds(vec![rat(0, 1), rat(1, 1)]).unwrap();
        let report = bound_chain(&model, &Alphabet::binary(), 3).unwrap();
        for row in &report.rows {
            assert!(row.nullity > 1);
            assert!(row.cap.is_none());
        }
    }

    #[test]
    fn surface_reduces_to_chain_on_the_axis() {
        let model = MutationModel::tds(vec![rat(3, 4), rat(1, 4)]).unwrap();
        let chain = bound_chain(&model, &Alphabet::binary(), 3).unwrap();
        let surface = bound_surface(0.25, 0.0, 3).unwrap().unwrap();
        let on_axis = chain.rows.iter().find(|r| r.k == 3).unwrap().cap.unwrap();
        assert!((surface - on_axis).abs() < 1e-12);
    }

    #[test]
    fn surface_rejects_bad_probabilities_and_detects_nonuniqueness() {
        assert!(bound_surface(0.7, 0.7, 2).is_err());
        assert!(bound_surface(-0.1, 0.5, 2).is_err());
        // No substitutions at all: limit depends on the start.
        assert_eq!(bound_surface(0.5, 0.5, 2).unwrap(), None);
    }

    #[test]
    fn capacity_limits_match_substitution_strength() {
        // Nearly pure substitution keeps strings near uniform; nearly
        // pure duplication locks in heavy repetition.
        let high = bound_surface(0.01, 0.0, 2).unwrap().unwrap();
        assert!(high > 0.9, "high-substitution cap {high}");
        let low = bound_surface(0.999, 0.0, 2).unwrap().unwrap();
        assert!(low < 0.1, "low-substitution cap {low}");
    }

    #[test]
    fn run_length_entropy_matches_worked_values() {
        let half = id_binary_len1_entropy(1, 1).unwrap();
        assert!((half - std::f64::consts::LOG2_E / 2.0).abs() < 1e-15);
        // Long balanced starts approach one bit per symbol.
        let big = id_binary_len1_entropy(1_000_000, 1_000_000).unwrap();
        assert!((big - 1.0).abs() < 1e-3);
        assert!(id_binary_len1_entropy(0, 5).is_err());
    }

    #[test]
    fn binary_entropy_edges() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert!(binary_entropy(1.5).is_err());
    }
}

//! Formula-free ground truth for the drift formulas.
//!
//! For a given string, every possible one-step mutation event is written
//! out with its exact probability — by plain string editing, no formulas
//! — and expected count changes are obtained by counting k-mers in each
//! edited string. Comparing these brute-force expectations against the
//! closed-form drifts ([`crate::tds::delta_dup`], [`crate::tds::delta_sub`],
//! [`crate::id::delta_id`]) is the central correctness check of this
//! crate: agreement must be exact, as rational numbers, word by word.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::circular::CircularString;
use crate::error::{Error, Result};
use crate::id::{delta_id, ShortWordVector};
use crate::kmer::{count_kmers, KmerIndex};
use crate::model::{ModelKind, MutationModel};
use crate::tds::{delta_dup, delta_dup_miscounted, delta_sub};
use crate::Rational;

/// One concrete mutation event: what happened, how likely, and the
/// resulting string.
#[derive(Debug, Clone)]
pub struct MutationEventRecord {
    pub description: String,
    pub probability: Rational,
    pub result: CircularString,
}

/// Every event one step can produce, with probabilities summing to 1
/// (conditioned on the event length if one is fixed).
#[derive(Debug, Clone)]
pub struct EventEnumeration {
    /// `Some(l)` if the enumeration is conditioned on event length `l`.
    pub conditioned_len: Option<usize>,
    pub events: Vec<MutationEventRecord>,
}

fn events_for_len(
    s: &CircularString,
    kind: ModelKind,
    l: usize,
    scale: &Rational,
    out: &mut Vec<MutationEventRecord>,
) -> Result<()> {
    let n = s.len();
    match (kind, l) {
        (ModelKind::Tds, 0) => {
            // n (|A| - 1) equally likely substitutions.
            let asize = s.alphabet().size();
            let p = scale / Rational::from_integer(((n * (asize - 1)) as u64).into());
            for pos in 0..n {
                for sym in 0..asize as u8 {
                    if sym == s.get(pos) {
                        continue;
                    }
                    let mut t = s.clone();
                    t.substitute(pos, sym)?;
                    out.push(MutationEventRecord {
                        description: format!(
                            "substitute position {pos} to {}",
                            s.alphabet().symbol(sym)
                        ),
                        probability: p.clone(),
                        result: t,
                    });
                }
            }
        }
        (ModelKind::Tds, _) => {
            // n equally likely template starts.
            let p = scale / Rational::from_integer((n as u64).into());
            for start in 0..n {
                let mut t = s.clone();
                t.tandem_duplicate(start, l)?;
                out.push(MutationEventRecord {
                    description: format!("tandem duplication of length {l} at {start}"),
                    probability: p.clone(),
                    result: t,
                });
            }
        }
        (ModelKind::Id, 0) => {
            return Err(Error::Internal(
                "interspersed models have no length-0 events".into(),
            ));
        }
        (ModelKind::Id, _) => {
            // n * n equally likely (template start, gap) pairs.
            let p = scale / Rational::from_integer(((n * n) as u64).into());
            for start in 0..n {
                let copy = s.window(start, l);
                for gap in 0..n {
                    let mut t = s.clone();
                    t.insert_block(gap, &copy)?;
                    out.push(MutationEventRecord {
                        description: format!(
                            "interspersed duplication of length {l} at {start} into gap {gap}"
                        ),
                        probability: p.clone(),
                        result: t,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Enumerates every possible event of one mutation step.
///
/// With `fixed_len = Some(l)` the enumeration is conditioned on the
/// event length (useful for checking a per-length drift formula even if
/// the model gives `l` probability zero); with `None` events of all
/// supported lengths appear, weighted by the length distribution. The
/// probabilities are verified to sum to exactly 1 before returning.
pub fn enumerate_events(
    s: &CircularString,
    model: &MutationModel,
    fixed_len: Option<usize>,
) -> Result<EventEnumeration> {
    let mut events = Vec::new();
    match fixed_len {
        Some(l) => {
            if l >= s.len() {
                return Err(Error::InvalidParameter(format!(
                    "event length {l} must be below the string length {}",
                    s.len()
                )));
            }
            if l == 0 && model.kind() == ModelKind::Id {
                return Err(Error::InvalidParameter(
                    "interspersed models have no length-0 events".into(),
                ));
            }
            events_for_len(s, model.kind(), l, &Rational::one(), &mut events)?;
        }
        None => {
            if s.len() < model.support_bound() {
                return Err(Error::InvalidParameter(format!(
                    "string length {} is below the model's support bound {}",
                    s.len(),
                    model.support_bound()
                )));
            }
            for l in model.support() {
                events_for_len(s, model.kind(), l, &model.q_at(l), &mut events)?;
            }
        }
    }
    let total: Rational = events.iter().map(|e| &e.probability).sum();
    if !total.is_one() {
        return Err(Error::Internal(format!(
            "event probabilities sum to {total}, expected 1"
        )));
    }
    Ok(EventEnumeration {
        conditioned_len: fixed_len,
        events,
    })
}

/// Brute-force expected change of every k-mer count in one step:
/// `sum over events of probability * (count after - count before)`,
/// exactly, in lexicographic k-mer order.
pub fn expected_delta(
    s: &CircularString,
    model: &MutationModel,
    fixed_len: Option<usize>,
    k: usize,
) -> Result<Vec<Rational>> {
    if k > s.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds the string length {}",
            s.len()
        )));
    }
    let enumeration = enumerate_events(s, model, fixed_len)?;
    let before = count_kmers(s, k)?;
    let mut acc = vec![Rational::zero(); before.index().size()];
    for event in &enumeration.events {
        let after = count_kmers(&event.result, k)?;
        for (code, (&a, &b)) in after.counts().iter().zip(before.counts()).enumerate() {
            let diff = a as i64 - b as i64;
            if diff != 0 {
                acc[code] += &event.probability * Rational::from_integer(diff.into());
            }
        }
    }
    Ok(acc)
}

/// A word where oracle and formula disagree, with both exact values.
#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub word: String,
    pub oracle: String,
    pub formula: String,
}

/// Outcome of comparing a drift formula against the event enumeration
/// for every word of one length.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub k: usize,
    pub fixed_len: Option<usize>,
    pub words_checked: usize,
    /// True when the string is shorter than twice `k + M`; below that
    /// floor the drift formulas may legitimately disagree with the
    /// enumeration because windows interact with themselves around the
    /// circle.
    pub below_length_floor: bool,
    pub discrepancies: Vec<Discrepancy>,
}

impl ComparisonReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Which formula family a comparison should exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FormulaRoute {
    /// The real drift formulas.
    Correct,
    /// The deliberately wrong destruction-count variant (negative
    /// control).
    MiscountControl,
}

fn compare_route(
    s: &CircularString,
    model: &MutationModel,
    fixed_len: Option<usize>,
    k: usize,
    route: FormulaRoute,
) -> Result<ComparisonReport> {
    let oracle = expected_delta(s, model, fixed_len, k)?;
    let index = KmerIndex::new(s.alphabet(), k)?;
    let lens: Vec<usize> = match fixed_len {
        Some(l) => vec![l],
        None => model.support(),
    };
    for &l in &lens {
        if model.kind() == ModelKind::Tds && l >= k {
            return Err(Error::InvalidParameter(format!(
                "tandem drift formulas need l < k, got l = {l}, k = {k}"
            )));
        }
    }

    // Formula-side expectation for each word.
    let mut formula = vec![Rational::zero(); index.size()];
    match model.kind() {
        ModelKind::Tds => {
            let x = count_kmers(s, k)?.frequencies();
            for code in index.codes() {
                let u = index.decode(code);
                let mut value = Rational::zero();
                for &l in &lens {
                    let weight = match fixed_len {
                        Some(_) => Rational::one(),
                        None => model.q_at(l),
                    };
                    let form = match (l, route) {
                        (0, _) => delta_sub(&u, &index)?,
                        (_, FormulaRoute::Correct) => delta_dup(&u, l, &index)?,
                        (_, FormulaRoute::MiscountControl) => {
                            delta_dup_miscounted(&u, l, &index)?
                        }
                    };
                    value += weight * form.evaluate(&x)?;
                }
                formula[code] = value;
            }
        }
        ModelKind::Id => {
            let max_needed = k.max(lens.iter().copied().max().unwrap_or(1));
            let x = ShortWordVector::<Rational>::from_circular(s, max_needed)?;
            for code in index.codes() {
                let u = index.decode(code);
                let mut value = Rational::zero();
                for &l in &lens {
                    let weight = match fixed_len {
                        Some(_) => Rational::one(),
                        None => model.q_at(l),
                    };
                    value += weight * delta_id(&u, l, &x)?;
                }
                formula[code] = value;
            }
        }
    }

    let floor = 2 * (k + model.support_bound());
    let discrepancies = index
        .codes()
        .filter(|&code| oracle[code] != formula[code])
        .map(|code| Discrepancy {
            word: index.render(code),
            oracle: oracle[code].to_string(),
            formula: formula[code].to_string(),
        })
        .collect();
    Ok(ComparisonReport {
        k,
        fixed_len,
        words_checked: index.size(),
        below_length_floor: s.len() < floor,
        discrepancies,
    })
}

/// Compares the drift formulas against the event enumeration, word by
/// word, as exact rationals. On strings at least `2 (k + M)` long the
/// formulas are exact and the report must come back clean.
pub fn compare_to_formula(
    s: &CircularString,
    model: &MutationModel,
    fixed_len: Option<usize>,
    k: usize,
) -> Result<ComparisonReport> {
    compare_route(s, model, fixed_len, k, FormulaRoute::Correct)
}

/// Same comparison but against the miscounted-destruction control
/// formula. A sound enumeration must produce discrepancies here on any
/// string that contains the words at all; this is the self-test showing
/// the comparison can actually fail. (The suffix-lift convention error
/// cannot serve here: it evaluates identically on marginal-consistent
/// frequencies and is caught at the coefficient level instead, see
/// [`crate::tds::delta_dup_suffix_lifted`].)
pub fn compare_to_miscount_control(
    s: &CircularString,
    model: &MutationModel,
    fixed_len: Option<usize>,
    k: usize,
) -> Result<ComparisonReport> {
    if model.kind() != ModelKind::Tds {
        return Err(Error::InvalidParameter(
            "the miscount control applies to the tandem kind only".into(),
        ));
    }
    if fixed_len == Some(0) {
        return Err(Error::InvalidParameter(
            "the miscount control needs a duplication length".into(),
        ));
    }
    compare_route(s, model, fixed_len, k, FormulaRoute::MiscountControl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::rat;

    fn dna(text: &str) -> CircularString {
        CircularString::parse(&Alphabet::dna(), text).unwrap()
    }

    #[test]
    fn conditioned_tandem_events_are_uniform_over_starts() {
        let s = dna("ACGTAC");
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let e = enumerate_events(&s, &model, Some(1)).unwrap();
        assert_eq!(e.events.len(), 6);
        for ev in &e.events {
            assert_eq!(ev.probability, rat(1, 6));
            assert_eq!(ev.result.len(), 7);
        }
    }

    #[test]
    fn substitution_events_cover_all_alternatives() {
        let s = dna("ACGT");
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let e = enumerate_events(&s, &model, Some(0)).unwrap();
        assert_eq!(e.events.len(), 4 * 3);
        for ev in &e.events {
            assert_eq!(ev.probability, rat(1, 12));
            assert_eq!(ev.result.len(), 4);
            assert_ne!(ev.result, s);
        }
    }

    #[test]
    fn interspersed_events_cover_start_gap_pairs() {
        let s = dna("ACGTA");
        let model = MutationModel::id(vec![rat(0, 1), rat(1, 2), rat(1, 2)]).unwrap();
        let e = enumerate_events(&s, &model, Some(2)).unwrap();
        assert_eq!(e.events.len(), 25);
        let total: Rational = e.events.iter().map(|ev| &ev.probability).sum();
        assert!(total.is_one());
    }

    #[test]
    fn unconditioned_probabilities_weight_by_length_distribution() {
        let s = dna("ACGTAC");
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let e = enumerate_events(&s, &model, None).unwrap();
        // 6 * 3 substitutions at (1/4) / 18 each plus 6 duplications at
        // (3/4) / 6 each.
        assert_eq!(e.events.len(), 24);
        let total: Rational = e.events.iter().map(|ev| &ev.probability).sum();
        assert!(total.is_one());
    }

    #[test]
    fn expected_delta_reproduces_hand_computed_case() {
        // 01 with a length-1 tandem duplication: templates 0 -> 001 and
        // 1 -> 011, each with probability 1/2. 2-mer counts go from
        // {01: 1, 10: 1} to {00,01,10} and {01,11,10}: the expected
        // change is +1/2 for 00 and 11, zero otherwise.
        let s = CircularString::parse(&Alphabet::binary(), "01").unwrap();
        let model = MutationModel::tds(vec![rat(0, 1), rat(1, 1)]).unwrap();
        let delta = expected_delta(&s, &model, Some(1), 2).unwrap();
        assert_eq!(delta, vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)]);
    }

    #[test]
    fn formulas_agree_on_a_long_string() {
        let s = dna("ACGTACGGTACGTTACGATACGCATACGT");
        let model = MutationModel::tds(vec![rat(1, 4), rat(1, 2), rat(1, 4)]).unwrap();
        for fixed in [Some(0), Some(1), Some(2), None] {
            let report = compare_to_formula(&s, &model, fixed, 3).unwrap();
            assert!(
                report.agrees(),
                "fixed = {fixed:?}: {:?}",
                report.discrepancies
            );
        }
    }

    #[test]
    fn miscount_control_is_caught() {
        let s = dna("ACGTACGGTACGTTACGATACGCATACGT");
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        for fixed in [Some(1), None] {
            let report = compare_to_miscount_control(&s, &model, fixed, 3).unwrap();
            assert!(!report.agrees(), "control variant slipped past the oracle");
        }
        assert!(compare_to_miscount_control(&s, &model, Some(0), 3).is_err());
    }

    #[test]
    fn interspersed_formula_agrees_including_below_word_length() {
        let s = dna("ACGTACGGTACGTTACGATACGCATACGTCAG");
        let model = MutationModel::id(vec![rat(0, 1), rat(1, 2), rat(0, 1), rat(1, 2)]).unwrap();
        for fixed in [Some(1), Some(3), None] {
            for k in 1..=4 {
                let report = compare_to_formula(&s, &model, fixed, k).unwrap();
                assert!(
                    report.agrees(),
                    "fixed = {fixed:?}, k = {k}: {:?}",
                    report.discrepancies
                );
            }
        }
    }

    #[test]
    fn length_floor_is_flagged() {
        let s = dna("ACGTACG");
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let report = compare_to_formula(&s, &model, Some(1), 2).unwrap();
        assert!(report.below_length_floor);
    }
}

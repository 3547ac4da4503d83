//! Exact one-step drift of k-mer frequencies under the tandem model.
//!
//! Conditioned on an event of length `l`, the expected change of the
//! count of a word `u` (length `k`) in one step is a rational linear
//! combination of current k-mer frequencies. The combination is driven
//! by the self-overlap structure of `u` at shift `l`, captured by a mask
//! ([`phi_mask`]): a duplication can create an occurrence of `u` only
//! where `u` nearly repeats itself with period `l`, and can destroy one
//! only by splitting a window that straddles the template strictly.
//!
//! Words shorter than `k` that arise in the bookkeeping are re-expressed
//! in the k-mer basis by prefix extension ([`lift_to_k`]): on a circular
//! string, each occurrence of a short word extends to exactly one k-mer
//! starting at the same position.
//!
//! Summing the per-length drifts against the model's length distribution
//! gives a rate matrix whose null space contains every possible limit of
//! the k-mer frequency process ([`build_rate_matrix`]).

use num_traits::Zero;
use serde::Serialize;

use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::form::LinearForm;
use crate::kmer::{hamming_ball_1, lift_to_k, KmerIndex};
use crate::model::{ModelKind, MutationModel};
use crate::{rat, Rational};

/// Self-overlap mask of a word at a fixed shift.
///
/// Entry `j` (0-based) is "0" when `j >= shift` and `u[j] == u[j - shift]`,
/// else "X". A "0" marks a position that repeats the symbol `shift` places
/// earlier, so runs of zeros locate the near-periodic stretches of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMask {
    shift: usize,
    zeros: Vec<bool>,
}

impl PhiMask {
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// True if entry `j` is "0".
    pub fn is_zero(&self, j: usize) -> bool {
        self.zeros[j]
    }

    /// Length of the zero run starting right after the X prefix,
    /// i.e. at index `shift`.
    pub fn leading_run(&self) -> usize {
        self.zeros[self.shift..].iter().take_while(|&&z| z).count()
    }

    /// Length of the zero run ending at the last index.
    pub fn trailing_run(&self) -> usize {
        self.zeros.iter().rev().take_while(|&&z| z).count()
    }

    /// True if every entry from index `shift` on is "0" (mask `X..X0..0`).
    pub fn fully_periodic(&self) -> bool {
        self.leading_run() == self.zeros.len() - self.shift
    }

    /// True if the `width` entries starting at `j` are all "0".
    pub fn zero_window(&self, j: usize, width: usize) -> bool {
        j + width <= self.zeros.len() && self.zeros[j..j + width].iter().all(|&z| z)
    }

    /// Rendering such as `XXX00X0000X0000`.
    pub fn render(&self) -> String {
        self.zeros.iter().map(|&z| if z { '0' } else { 'X' }).collect()
    }
}

/// Computes the self-overlap mask of `u` at the given shift.
pub fn phi_mask(u: &[u8], shift: usize) -> Result<PhiMask> {
    if shift < 1 || shift >= u.len() {
        return Err(Error::InvalidParameter(format!(
            "mask shift must be in 1..{}, got {shift}",
            u.len()
        )));
    }
    let zeros = (0..u.len())
        .map(|j| j >= shift && u[j] == u[j - shift])
        .collect();
    Ok(PhiMask {
        shift,
        zeros,
    })
}

/// `u` with the block of `width` symbols starting at `start` removed.
pub fn delete_block(u: &[u8], start: usize, width: usize) -> Result<Word> {
    if start + width > u.len() || width == 0 {
        return Err(Error::InvalidParameter(format!(
            "cannot delete {width} symbols at {start} from a word of length {}",
            u.len()
        )));
    }
    let mut out = Vec::with_capacity(u.len() - width);
    out.extend_from_slice(&u[..start]);
    out.extend_from_slice(&u[start + width..]);
    Ok(out)
}

/// The four building blocks of the duplication drift of a word `u` at
/// event length `l`, all already lifted to the k-mer basis.
///
/// * `creation_left` / `creation_right`: new occurrences whose window
///   sticks out of the duplicated region on the left / right; they exist
///   only while the mask's leading / trailing zero run allows the overlap.
/// * `deletion_window`: occurrences read off `u` with an interior block
///   of `l` symbols removed, one per all-zero mask window (only used when
///   `k >= 2l`).
/// * `wraparound`: occurrences that wrap around a whole copy when `u` is
///   fully periodic and so short that window and copy interlock (only
///   possible when `k <= 2l - 2`).
#[derive(Debug, Clone)]
pub struct AuxForms {
    pub creation_left: LinearForm,
    pub creation_right: LinearForm,
    pub deletion_window: LinearForm,
    pub wraparound: LinearForm,
}

/// Adds `coeff * x^w` to the form, lifting `w` to the basis length first
/// if it is short.
fn add_lifted(form: &mut LinearForm, word: &[u8], coeff: Rational) -> Result<()> {
    if word.len() == form.index().k() {
        form.add_word(word, coeff)
    } else {
        let lifted = lift_to_k(word, form.index())?;
        form.add_scaled(&lifted, &coeff)
    }
}

/// Computes the four auxiliary forms for `u` at event length `l`.
pub fn aux_forms(u: &[u8], l: usize, index: &KmerIndex) -> Result<AuxForms> {
    if u.len() != index.k() {
        return Err(Error::InvalidParameter(
            "word length does not match basis length".into(),
        ));
    }
    if l < 1 || l >= u.len() {
        return Err(Error::InvalidParameter(format!(
            "event length must be in 1..{}, got {l}",
            u.len()
        )));
    }
    let k = u.len();
    let mask = phi_mask(u, l)?;
    let one = rat(1, 1);

    let mut creation_left = LinearForm::zero(index.clone());
    for i in 1..=mask.leading_run().min(l - 1) {
        add_lifted(&mut creation_left, &u[i..], one.clone())?;
    }

    let mut creation_right = LinearForm::zero(index.clone());
    for i in 1..=mask.trailing_run().min(l - 1) {
        add_lifted(&mut creation_right, &u[..k - i], one.clone())?;
    }

    let mut deletion_window = LinearForm::zero(index.clone());
    for start in 0..=k.saturating_sub(l) {
        if mask.zero_window(start, l) {
            add_lifted(&mut deletion_window, &delete_block(u, start, l)?, one.clone())?;
        }
    }

    let mut wraparound = LinearForm::zero(index.clone());
    if mask.fully_periodic() && k <= 2 * l - 2 {
        for b in (k - l + 1)..=(l - 1) {
            let mut word = u[b..l].to_vec();
            word.extend_from_slice(&u[..b]);
            add_lifted(&mut wraparound, &word, one.clone())?;
        }
    }

    Ok(AuxForms {
        creation_left,
        creation_right,
        deletion_window,
        wraparound,
    })
}

/// Expected one-step change of the count of `u` conditioned on a tandem
/// duplication of length `l`, as a form in current k-mer frequencies.
///
/// Occurrences created at the copy's left and right seams always
/// contribute; interior contributions come from deletion windows when the
/// window is at least twice the event length (`k >= 2l`) and from
/// wraparound occurrences otherwise. Each of the `k - 1 - l` windows that
/// strictly straddle the template is destroyed with probability `x^u`.
pub fn delta_dup(u: &[u8], l: usize, index: &KmerIndex) -> Result<LinearForm> {
    let k = index.k();
    if l < 1 || l >= k {
        return Err(Error::InvalidParameter(format!(
            "duplication length must be in 1..{k}, got {l}"
        )));
    }
    let aux = aux_forms(u, l, index)?;
    let mut form = aux.creation_left;
    form.add_scaled(&aux.creation_right, &rat(1, 1))?;
    if k >= 2 * l {
        form.add_scaled(&aux.deletion_window, &rat(1, 1))?;
    } else {
        form.add_scaled(&aux.wraparound, &rat(1, 1))?;
    }
    let destroyed = (k - 1 - l) as i64;
    form.add_word(u, rat(-destroyed, 1))?;
    Ok(form)
}

/// Expected one-step change of the count of `u` conditioned on a point
/// substitution: each of the `k` windows through the changed position
/// turns a distance-one neighbor into `u` (gain) or `u` into something
/// else (loss), with the replacement uniform over the other `|A| - 1`
/// symbols.
pub fn delta_sub(u: &[u8], index: &KmerIndex) -> Result<LinearForm> {
    if u.len() != index.k() {
        return Err(Error::InvalidParameter(
            "word length does not match basis length".into(),
        ));
    }
    let alternatives = (index.alphabet().size() - 1) as i64;
    let gain = Rational::new(1.into(), alternatives.into());
    let mut form = LinearForm::zero(index.clone());
    for v in hamming_ball_1(u, index.alphabet()) {
        form.add_word(&v, gain.clone())?;
    }
    form.add_word(u, rat(-(u.len() as i64), 1))?;
    Ok(form)
}

/// One weighted component of a rate matrix: the drift rows conditioned
/// on a single event length.
#[derive(Debug, Clone)]
pub struct RateComponent {
    pub event_len: usize,
    pub weight: Rational,
    /// Row `r` holds the drift of the word with code `r`.
    pub rows: Vec<LinearForm>,
}

/// The linear drift `h(x) = A x` of k-mer frequencies under a tandem
/// model, together with its per-length components.
#[derive(Debug, Clone)]
pub struct RateMatrix {
    index: KmerIndex,
    components: Vec<RateComponent>,
    rows: Vec<LinearForm>,
}

impl RateMatrix {
    pub fn index(&self) -> &KmerIndex {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.size()
    }

    /// Combined rows `sum_l q_l A_l`, one per word code.
    pub fn rows(&self) -> &[LinearForm] {
        &self.rows
    }

    pub fn components(&self) -> &[RateComponent] {
        &self.components
    }

    pub fn entry(&self, row: usize, col: usize) -> Rational {
        self.rows[row].coeff(col)
    }

    /// Exact column sums of the combined matrix.
    pub fn column_sums(&self) -> Vec<Rational> {
        Self::column_sums_of(&self.rows)
    }

    fn column_sums_of(rows: &[LinearForm]) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); rows.len()];
        for row in rows {
            for (col, c) in row.terms() {
                sums[col] += c;
            }
        }
        sums
    }

    /// Checks conservation and sign structure, for the combined matrix
    /// and every component: all column sums exactly zero, diagonal
    /// entries nonpositive, off-diagonal entries nonnegative.
    pub fn verify_structure(&self) -> Result<()> {
        let mut targets: Vec<(String, &[LinearForm])> =
            vec![("combined".into(), self.rows.as_slice())];
        for comp in &self.components {
            targets.push((format!("component l = {}", comp.event_len), &comp.rows));
        }
        for (name, rows) in targets {
            for (col, sum) in Self::column_sums_of(rows).iter().enumerate() {
                if !sum.is_zero() {
                    return Err(Error::Internal(format!(
                        "{name}: column {} sums to {sum}, expected 0",
                        self.index.render(col)
                    )));
                }
            }
            for (r, row) in rows.iter().enumerate() {
                for (col, c) in row.terms() {
                    let bad = if col == r {
                        c > &Rational::zero()
                    } else {
                        c < &Rational::zero()
                    };
                    if bad {
                        return Err(Error::Internal(format!(
                            "{name}: entry ({}, {}) = {c} has the wrong sign",
                            self.index.render(r),
                            self.index.render(col)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Dense copy of the combined matrix.
    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.index.size()];
                for (col, c) in row.terms() {
                    dense[col] = c.clone();
                }
                dense
            })
            .collect()
    }
}

/// Assembles the k-mer drift matrix of a tandem model.
///
/// Row `u` of component `l >= 1` is `delta_dup(u, l) - l * x^u` (the
/// drift of the frequency rather than the count, since the length grows
/// by `l`); component 0 is `delta_sub`. The combined matrix weighs the
/// components by the length distribution. Requires `k >= M` so that
/// every event length the model can draw stays below the word length.
pub fn build_rate_matrix(
    model: &MutationModel,
    index: &KmerIndex,
) -> Result<RateMatrix> {
    if model.kind() != ModelKind::Tds {
        return Err(Error::InvalidParameter(
            "rate matrices are defined for the tandem kind only".into(),
        ));
    }
    let k = index.k();
    if k < model.support_bound() {
        return Err(Error::InvalidParameter(format!(
            "word length k = {k} must be at least the support bound M = {}",
            model.support_bound()
        )));
    }
    let mut components = Vec::new();
    for l in model.support() {
        let mut rows = Vec::with_capacity(index.size());
        for code in index.codes() {
            let u = index.decode(code);
            let mut row = if l == 0 {
                delta_sub(&u, index)?
            } else {
                delta_dup(&u, l, index)?
            };
            if l > 0 {
                row.add_word(&u, rat(-(l as i64), 1))?;
            }
            rows.push(row);
        }
        components.push(RateComponent {
            event_len: l,
            weight: model.q_at(l),
            rows,
        });
    }
    let mut rows = vec![LinearForm::zero(index.clone()); index.size()];
    for comp in &components {
        for (row, comp_row) in rows.iter_mut().zip(&comp.rows) {
            row.add_scaled(comp_row, &comp.weight)?;
        }
    }
    Ok(RateMatrix {
        index: index.clone(),
        components,
        rows,
    })
}

/// Deliberately wrong variant of [`delta_dup`] that lifts short words by
/// suffix extension instead of prefix extension. It exists only as a
/// negative control and must never be used for analysis.
///
/// The swap produces a genuinely different linear form (the coefficient
/// maps differ on asymmetric words), but evaluating both forms on
/// frequencies measured from an actual circular string gives identical
/// numbers: a short word's frequency equals the summed frequencies of
/// its one-sided extensions on either side, so any marginal-consistent
/// vector cannot tell the two lifts apart. The convention error is
/// therefore detected at the coefficient level, where the forms are
/// compared term by term; evaluation-level comparisons need a control
/// that is wrong on consistent data too, see [`delta_dup_miscounted`].
pub fn delta_dup_suffix_lifted(u: &[u8], l: usize, index: &KmerIndex) -> Result<LinearForm> {
    let k = index.k();
    if l < 1 || l >= k {
        return Err(Error::InvalidParameter(format!(
            "duplication length must be in 1..{k}, got {l}"
        )));
    }
    // Same bookkeeping as delta_dup, but every short word is expressed
    // through the words that END in it rather than start with it.
    let mut form = LinearForm::zero(index.clone());
    let mask = phi_mask(u, l)?;
    let mut shorts: Vec<Word> = Vec::new();
    for i in 1..=mask.leading_run().min(l - 1) {
        shorts.push(u[i..].to_vec());
    }
    for i in 1..=mask.trailing_run().min(l - 1) {
        shorts.push(u[..k - i].to_vec());
    }
    if k >= 2 * l {
        for start in 0..=k - l {
            if mask.zero_window(start, l) {
                shorts.push(delete_block(u, start, l)?);
            }
        }
    } else if mask.fully_periodic() && k <= 2 * l - 2 {
        for b in (k - l + 1)..=(l - 1) {
            let mut word = u[b..l].to_vec();
            word.extend_from_slice(&u[..b]);
            shorts.push(word);
        }
    }
    let base = index.alphabet().size();
    for w in shorts {
        if w.len() == k {
            form.add_word(&w, rat(1, 1))?;
        } else {
            // Suffix extension: every word of length k ending in w.
            let span = base.pow((k - w.len()) as u32);
            let tail = w.iter().fold(0usize, |acc, &s| acc * base + s as usize);
            for head in 0..span {
                form.add_code(head * base.pow(w.len() as u32) + tail, rat(1, 1));
            }
        }
    }
    form.add_word(u, rat(-((k - 1 - l) as i64), 1))?;
    Ok(form)
}

/// Deliberately wrong variant of [`delta_dup`] whose destruction count is
/// off by one (as if the duplication destroyed every window it touches,
/// forgetting that the window equal to the copy itself survives). It
/// exists only as a negative control: its predictions differ from the
/// true expectation on every word the string contains, so an
/// evaluation-level comparison against event enumeration must flag it.
/// Never use it for analysis.
pub fn delta_dup_miscounted(u: &[u8], l: usize, index: &KmerIndex) -> Result<LinearForm> {
    let mut form = delta_dup(u, l, index)?;
    form.add_word(u, rat(-1, 1))?;
    Ok(form)
}

/// Serializable snapshot of a rate-matrix analysis (used by reports).
#[derive(Debug, Clone, Serialize)]
pub struct MatrixView {
    pub order: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

impl MatrixView {
    pub fn of(matrix: &RateMatrix) -> Self {
        let order = matrix.index().codes().map(|c| matrix.index().render(c)).collect();
        let entries = matrix
            .to_dense()
            .iter()
            .map(|row| row.iter().map(|e| e.to_string()).collect())
            .collect();
        Self { order, entries }
    }
}

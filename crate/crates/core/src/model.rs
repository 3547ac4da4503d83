//! Mutation models: a kind plus a length distribution.
//!
//! A model draws an event length `l` from a fixed distribution `q` with
//! bounded support: `q[0]` is the probability of a point substitution and
//! `q[l]` for `l >= 1` the probability of a duplication of length `l`.
//! The support bound `M` (smallest bound with `q[l] = 0` for `l >= M`)
//! controls both the minimum string length a step needs and the word
//! lengths whose limiting frequencies the analysis can pin down.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Rational;

/// How a drawn block is placed back into the string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    /// Tandem duplication with substitution: the copy lands immediately
    /// after its template; length 0 means a point substitution.
    Tds,
    /// Interspersed duplication: the copy lands at an independently drawn
    /// gap; substitutions do not occur.
    Id,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelKind::Tds => write!(f, "tandem-duplication-substitution"),
            ModelKind::Id => write!(f, "interspersed-duplication"),
        }
    }
}

/// A mutation model: kind plus exact event-length distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationModel {
    kind: ModelKind,
    /// `q[l]` is the probability of an event of length `l`; trailing
    /// zeros are trimmed so `q.len()` is the support bound `M`.
    q: Vec<Rational>,
}

impl MutationModel {
    /// Builds a model, validating the length distribution.
    ///
    /// Requirements: all entries nonnegative and summing to exactly 1;
    /// substitutions must not be certain (`q[0] < 1`); the interspersed
    /// kind admits no substitutions at all (`q[0] = 0`).
    pub fn new(kind: ModelKind, mut q: Vec<Rational>) -> Result<Self> {
        if q.iter().any(|p| p < &Rational::zero()) {
            return Err(Error::InvalidParameter(
                "event-length probabilities must be nonnegative".into(),
            ));
        }
        let sum: Rational = q.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidParameter(format!(
                "event-length probabilities sum to {sum}, expected 1"
            )));
        }
        while q.last().is_some_and(|p| p.is_zero()) {
            q.pop();
        }
        // After trimming, the last entry is positive, so q.len() >= 2
        // exactly when some duplication length has positive probability.
        if q.len() < 2 {
            return Err(Error::InvalidParameter(
                "substitutions must not be the only events (q[0] = 1)".into(),
            ));
        }
        if kind == ModelKind::Id && !q[0].is_zero() {
            return Err(Error::InvalidParameter(
                "interspersed models admit no substitutions (q[0] must be 0)".into(),
            ));
        }
        Ok(Self { kind, q })
    }

    /// Convenience constructor for the tandem kind.
    pub fn tds(q: Vec<Rational>) -> Result<Self> {
        Self::new(ModelKind::Tds, q)
    }

    /// Convenience constructor for the interspersed kind. The
    /// distribution is given as `q[0], q[1], ...` with `q[0] = 0`.
    pub fn id(q: Vec<Rational>) -> Result<Self> {
        Self::new(ModelKind::Id, q)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// The trimmed distribution; `q()[l]` is the probability of length `l`.
    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    /// Probability of an event of length `l` (zero beyond the support).
    pub fn q_at(&self, len: usize) -> Rational {
        self.q.get(len).cloned().unwrap_or_else(Rational::zero)
    }

    /// The support bound `M`: `q[l] = 0` for every `l >= M`.
    pub fn support_bound(&self) -> usize {
        self.q.len()
    }

    /// Largest event length with positive probability, `M - 1`.
    pub fn max_event_len(&self) -> usize {
        self.q.len() - 1
    }

    /// Event lengths with positive probability, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.q.len()).filter(|&l| !self.q[l].is_zero()).collect()
    }

    /// True if the model performs no substitutions.
    pub fn is_duplication_only(&self) -> bool {
        self.q[0].is_zero()
    }

    /// Cumulative distribution over lengths `0..M` as floats, for sampling.
    pub(crate) fn cumulative_f64(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.q
            .iter()
            .map(|p| {
                acc += p.to_f64().unwrap_or(0.0);
                acc
            })
            .collect()
    }

    /// Short description such as `tandem-duplication-substitution, q = [1/4, 3/4]`.
    pub fn describe(&self) -> String {
        let probs: Vec<String> = self.q.iter().map(|p| p.to_string()).collect();
        format!("{}, q = [{}]", self.kind, probs.join(", "))
    }
}

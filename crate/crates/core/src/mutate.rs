//! Seeded mutation steps and reproducible trajectory simulation.
//!
//! Each step draws an event length from the model's distribution and
//! applies one mutation:
//!
//! * tandem kind — length 0 substitutes a uniformly chosen position with
//!   one of the other `|A| - 1` symbols (uniformly); length `l >= 1`
//!   copies the block starting at a uniform position next to itself;
//! * interspersed kind — the copied block is read from the pre-mutation
//!   string and inserted at an independently uniform gap (possibly
//!   inside the template).
//!
//! Determinism contract: a trajectory consumes randomness in a fixed
//! order (length, then position, then replacement symbol or gap), from a
//! counter-based generator seeded per trajectory, so identical seeds
//! reproduce identical trajectories on every platform.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabet::symbol_counts;
use crate::circular::CircularString;
use crate::error::{Error, Result};
use crate::kmer::count_kmers;
use crate::model::{ModelKind, MutationModel};
use crate::Rational;

/// What a single mutation step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepEvent {
    /// Position `pos` changed from `from` to `to`.
    Substitution { pos: usize, from: u8, to: u8 },
    /// The block `start..start+len` was copied next to itself.
    TandemDup { start: usize, len: usize },
    /// The block `start..start+len` was copied into gap `gap`.
    InterspersedDup { start: usize, len: usize, gap: usize },
}

impl StepEvent {
    /// How much the string grew.
    pub fn growth(&self) -> usize {
        match self {
            StepEvent::Substitution { .. } => 0,
            StepEvent::TandemDup { len, .. } => *len,
            StepEvent::InterspersedDup { len, .. } => *len,
        }
    }
}

fn check_step_preconditions(s: &CircularString, model: &MutationModel) -> Result<()> {
    if s.len() < model.support_bound() {
        return Err(Error::InvalidParameter(format!(
            "string length {} is below the model's support bound {}",
            s.len(),
            model.support_bound()
        )));
    }
    Ok(())
}

/// Draws an event length from the cumulative table.
fn draw_len(cum: &[f64], rng: &mut impl Rng) -> usize {
    let r: f64 = rng.random();
    cum.iter().position(|&c| r < c).unwrap_or(cum.len() - 1)
}

fn apply_tds(s: &mut CircularString, cum: &[f64], rng: &mut impl Rng) -> Result<StepEvent> {
    let len = draw_len(cum, rng);
    let n = s.len();
    if len == 0 {
        let pos = rng.random_range(0..n);
        let from = s.get(pos);
        // Uniform over the other |A| - 1 symbols.
        let offset = rng.random_range(0..s.alphabet().size() as u8 - 1);
        let to = if offset < from { offset } else { offset + 1 };
        s.substitute(pos, to)?;
        Ok(StepEvent::Substitution { pos, from, to })
    } else {
        let start = rng.random_range(0..n);
        s.tandem_duplicate(start, len)?;
        Ok(StepEvent::TandemDup { start, len })
    }
}

fn apply_id(
    s: &mut CircularString,
    cum: &[f64],
    rng: &mut impl Rng,
) -> Result<StepEvent> {
    let len = draw_len(cum, rng);
    let n = s.len();
    let start = rng.random_range(0..n);
    let gap = rng.random_range(0..n);
    let copy = s.window(start, len);
    s.insert_block(gap, &copy)?;
    Ok(StepEvent::InterspersedDup { start, len, gap })
}

/// Applies one step of a tandem model.
pub fn step_tds(
    s: &mut CircularString,
    model: &MutationModel,
    rng: &mut impl Rng,
) -> Result<StepEvent> {
    if model.kind() != ModelKind::Tds {
        return Err(Error::InvalidParameter(
            "step_tds requires a tandem model".into(),
        ));
    }
    check_step_preconditions(s, model)?;
    apply_tds(s, &model.cumulative_f64(), rng)
}

/// Applies one step of an interspersed model.
pub fn step_id(
    s: &mut CircularString,
    model: &MutationModel,
    rng: &mut impl Rng,
) -> Result<StepEvent> {
    if model.kind() != ModelKind::Id {
        return Err(Error::InvalidParameter(
            "step_id requires an interspersed model".into(),
        ));
    }
    check_step_preconditions(s, model)?;
    apply_id(s, &model.cumulative_f64(), rng)
}

/// Recorded k-mer frequency snapshots of one simulated trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub k: usize,
    /// Printed k-mers in lexicographic order; column labels for
    /// `frequencies`.
    pub kmers: Vec<String>,
    /// Step numbers at which snapshots were taken (0 is the initial
    /// string; the final step is always included).
    pub steps: Vec<u64>,
    /// String length at each recorded step.
    pub lengths: Vec<u64>,
    /// Frequency vector at each recorded step, in `kmers` order.
    pub frequencies: Vec<Vec<f64>>,
}

/// Runs `n_steps` mutation steps from `s0`, recording a k-mer frequency
/// snapshot at step 0, every `record_every` steps, and at the end.
///
/// Returns the final string together with the record. The initial string
/// must be at least as long as both `k` and the model's support bound.
pub fn simulate(
    s0: &CircularString,
    model: &MutationModel,
    k: usize,
    n_steps: u64,
    record_every: u64,
    seed: u64,
) -> Result<(CircularString, TrajectoryRecord)> {
    if record_every < 1 {
        return Err(Error::InvalidParameter("record_every must be >= 1".into()));
    }
    if k < 1 || k > s0.len() {
        return Err(Error::InvalidParameter(format!(
            "snapshot word length k = {k} must be in 1..={}",
            s0.len()
        )));
    }
    check_step_preconditions(s0, model)?;

    let mut s = s0.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cum = model.cumulative_f64();
    let index = crate::kmer::KmerIndex::new(s0.alphabet(), k)?;

    let mut record = TrajectoryRecord {
        seed,
        k,
        kmers: index.codes().map(|c| index.render(c)).collect(),
        steps: Vec::new(),
        lengths: Vec::new(),
        frequencies: Vec::new(),
    };
    let snapshot = |s: &CircularString, step: u64, rec: &mut TrajectoryRecord| -> Result<()> {
        let counts = count_kmers(s, k)?;
        rec.steps.push(step);
        rec.lengths.push(s.len() as u64);
        rec.frequencies.push(
            counts
                .counts()
                .iter()
                .map(|&c| c as f64 / s.len() as f64)
                .collect(),
        );
        Ok(())
    };

    snapshot(&s, 0, &mut record)?;
    for step in 1..=n_steps {
        match model.kind() {
            ModelKind::Tds => apply_tds(&mut s, &cum, &mut rng)?,
            ModelKind::Id => apply_id(&mut s, &cum, &mut rng)?,
        };
        if step % record_every == 0 || step == n_steps {
            snapshot(&s, step, &mut record)?;
        }
    }
    Ok((s, record))
}

/// Simulates one trajectory per seed, in parallel; results come back in
/// seed order regardless of scheduling.
pub fn simulate_sweep(
    s0: &CircularString,
    model: &MutationModel,
    k: usize,
    n_steps: u64,
    record_every: u64,
    seeds: &[u64],
) -> Result<Vec<(CircularString, TrajectoryRecord)>> {
    seeds
        .par_iter()
        .map(|&seed| simulate(s0, model, k, n_steps, record_every, seed))
        .collect()
}

/// Exact conditional expectation of each symbol frequency after one step.
///
/// Enumerates every possible event of a duplication-only model with its
/// exact probability and averages the post-step frequencies in rational
/// arithmetic. For such models the result must equal the current
/// frequencies exactly (the frequencies are a martingale); the caller
/// compares.
pub fn martingale_one_step_check(
    s: &CircularString,
    model: &MutationModel,
) -> Result<Vec<Rational>> {
    if !model.is_duplication_only() {
        return Err(Error::InvalidParameter(
            "the martingale identity requires a duplication-only model (q[0] = 0)".into(),
        ));
    }
    check_step_preconditions(s, model)?;
    let n = s.len();
    let asize = s.alphabet().size();
    let mut expectation = vec![Rational::zero(); asize];
    for l in model.support() {
        let ql = model.q_at(l);
        let new_len = Rational::from_integer(((n + l) as u64).into());
        // Pre-divide the event weight: TDS events are uniform over n
        // template starts, interspersed ones over n * n (start, gap) pairs.
        let event_count = match model.kind() {
            ModelKind::Tds => n as u64,
            ModelKind::Id => (n * n) as u64,
        };
        let weight = ql / (Rational::from_integer(event_count.into()) * new_len);
        let mut add_outcome = |t: &CircularString| {
            for (a, &c) in symbol_counts(t.data(), s.alphabet()).iter().enumerate() {
                expectation[a] += &weight * Rational::from_integer(c.into());
            }
        };
        match model.kind() {
            ModelKind::Tds => {
                for start in 0..n {
                    let mut t = s.clone();
                    t.tandem_duplicate(start, l)?;
                    add_outcome(&t);
                }
            }
            ModelKind::Id => {
                for start in 0..n {
                    let copy = s.window(start, l);
                    for gap in 0..n {
                        let mut t = s.clone();
                        t.insert_block(gap, &copy)?;
                        add_outcome(&t);
                    }
                }
            }
        }
    }
    Ok(expectation)
}

/// Azuma–Hoeffding tail bound on symbol-frequency drift: the probability
/// that a symbol frequency moves by at least `lambda` from its initial
/// value, for a duplication-only model with support bound `m` starting
/// from a string of length `l0`, is at most `2 exp(-lambda^2 l0^2 / (2 m^4))`.
///
/// The bound may exceed 1 (vacuous) for weak parameters; `lambda = 0`
/// gives exactly 2.
pub fn hoeffding_bound(lambda: f64, l0: u64, m: u64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "deviation lambda must be a finite nonnegative number, got {lambda}"
        )));
    }
    if l0 < 1 || m < 1 {
        return Err(Error::InvalidParameter(
            "initial length and support bound must be positive".into(),
        ));
    }
    let l0 = l0 as f64;
    let m = m as f64;
    Ok(2.0 * (-(lambda * lambda * l0 * l0) / (2.0 * m.powi(4))).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::rat;

    fn binary(text: &str) -> CircularString {
        CircularString::parse(&Alphabet::binary(), text).unwrap()
    }

    #[test]
    fn step_grows_string_by_event_length() {
        let model = MutationModel::tds(vec![rat(1, 4), rat(1, 2), rat(1, 4)]).unwrap();
        let mut s = binary("01001101");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let before = s.len();
            let event = step_tds(&mut s, &model, &mut rng).unwrap();
            assert_eq!(s.len(), before + event.growth());
        }
    }

    #[test]
    fn substitution_changes_exactly_one_position() {
        // q[0] = 1 is not constructible, so force substitutions by
        // drawing until one occurs.
        let model = MutationModel::tds(vec![rat(9, 10), rat(1, 10)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        loop {
            let mut s = binary("0100110");
            let before = s.clone();
            if let StepEvent::Substitution { pos, from, to } =
                step_tds(&mut s, &model, &mut rng).unwrap()
            {
                assert_ne!(from, to);
                assert_eq!(before.get(pos), from);
                assert_eq!(s.get(pos), to);
                let diffs = (0..s.len()).filter(|&i| s.get(i) != before.get(i)).count();
                assert_eq!(diffs, 1);
                break;
            }
        }
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let tds = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let id = MutationModel::id(vec![rat(0, 1), rat(1, 1)]).unwrap();
        let mut s = binary("0100110");
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(step_tds(&mut s, &id, &mut rng).is_err());
        assert!(step_id(&mut s, &tds, &mut rng).is_err());
    }

    #[test]
    fn short_strings_are_rejected() {
        let model = MutationModel::tds(vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]).unwrap();
        let mut s = binary("010");
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(step_tds(&mut s, &model, &mut rng).is_err());
    }

    #[test]
    fn identical_seeds_reproduce_trajectories() {
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let s0 = binary("0100010");
        let a = simulate(&s0, &model, 2, 500, 50, 11).unwrap();
        let b = simulate(&s0, &model, 2, 500, 50, 11).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        let c = simulate(&s0, &model, 2, 500, 50, 12).unwrap();
        assert_ne!(a.1.frequencies, c.1.frequencies);
    }

    #[test]
    fn zero_steps_records_initial_frequencies_once() {
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let s0 = binary("0100010");
        let (s, record) = simulate(&s0, &model, 2, 0, 10, 5).unwrap();
        assert_eq!(s, s0);
        assert_eq!(record.steps, vec![0]);
        assert_eq!(record.lengths, vec![7]);
        // 0100010 circular 2-mers: 00 x3, 01 x2, 10 x2.
        assert_eq!(record.frequencies[0], vec![3.0 / 7.0, 2.0 / 7.0, 2.0 / 7.0, 0.0]);
    }

    #[test]
    fn snapshots_cover_start_interval_and_end() {
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let s0 = binary("0100010");
        let (_, record) = simulate(&s0, &model, 2, 105, 50, 5).unwrap();
        assert_eq!(record.steps, vec![0, 50, 100, 105]);
        assert!(record.lengths.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sweep_matches_individual_runs_in_seed_order() {
        let model = MutationModel::id(vec![rat(0, 1), rat(1, 2), rat(1, 2)]).unwrap();
        let s0 = binary("01001101");
        let sweep = simulate_sweep(&s0, &model, 2, 300, 100, &[4, 5, 6]).unwrap();
        for (i, seed) in [4u64, 5, 6].iter().enumerate() {
            let single = simulate(&s0, &model, 2, 300, 100, *seed).unwrap();
            assert_eq!(sweep[i].1, single.1);
        }
    }

    #[test]
    fn martingale_identity_holds_exactly() {
        let s = binary("01001101011");
        let x0 = |a: usize| {
            let counts = symbol_counts(s.data(), s.alphabet());
            rat(counts[a] as i64, s.len() as i64)
        };
        for model in [
            MutationModel::tds(vec![rat(0, 1), rat(1, 3), rat(2, 3)]).unwrap(),
            MutationModel::id(vec![rat(0, 1), rat(1, 2), rat(1, 2)]).unwrap(),
        ] {
            let expectation = martingale_one_step_check(&s, &model).unwrap();
            assert_eq!(expectation[0], x0(0), "{}", model.describe());
            assert_eq!(expectation[1], x0(1), "{}", model.describe());
        }
    }

    #[test]
    fn martingale_check_rejects_substitution_models() {
        let s = binary("0100110");
        let model = MutationModel::tds(vec![rat(1, 4), rat(3, 4)]).unwrap();
        assert!(martingale_one_step_check(&s, &model).is_err());
    }

    #[test]
    fn hoeffding_bound_values() {
        // Vacuous at lambda = 0.
        assert_eq!(hoeffding_bound(0.0, 100, 2).unwrap(), 2.0);
        // Worked value: 2 exp(-0.01 * 10^4 / 32) = 2 exp(-25/8).
        let b = hoeffding_bound(0.1, 100, 2).unwrap();
        assert!((b - 2.0 * (-3.125f64).exp()).abs() < 1e-15);
        // Tightens with longer strings, loosens with larger blocks.
        assert!(hoeffding_bound(0.1, 300, 2).unwrap() < b);
        assert!(hoeffding_bound(0.1, 100, 3).unwrap() > b);
        assert!(hoeffding_bound(-0.1, 100, 2).is_err());
        assert!(hoeffding_bound(0.1, 0, 2).is_err());
    }
}

//! Randomized structural invariants: properties that must hold for every
//! string, model, and word length, not just the worked examples.

use dupsys_core::id::decay_constant;
use dupsys_core::mutate::{martingale_one_step_check, step_id, step_tds};
use dupsys_core::oracle::enumerate_events;
use dupsys_core::tds::build_rate_matrix;
use dupsys_core::{
    count_kmers, lift_to_k, rat, symbol_counts, Alphabet, CircularString, KmerIndex, ModelKind,
    MutationModel, Rational,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alphabets() -> impl Strategy<Value = Alphabet> {
    prop_oneof![
        Just(Alphabet::binary()),
        Just(Alphabet::dna()),
        Just(Alphabet::new(&['1', '2', '3']).unwrap()),
    ]
}

fn string_over(alphabet: Alphabet, min_len: usize, max_len: usize) -> BoxedStrategy<CircularString> {
    let size = alphabet.size() as u8;
    prop::collection::vec(0..size, min_len..=max_len)
        .prop_map(move |word| {
            CircularString::parse(&alphabet, &alphabet.render_word(&word)).unwrap()
        })
        .boxed()
}

fn any_string() -> impl Strategy<Value = CircularString> {
    alphabets().prop_flat_map(|a| string_over(a, 5, 40))
}

/// Random length distribution over lengths 0..=2 as exact rationals.
fn tds_model() -> impl Strategy<Value = MutationModel> {
    prop::collection::vec(0u32..5, 2..=3)
        .prop_filter("need some mass beyond length 0", |w| {
            w.iter().skip(1).any(|&n| n > 0)
        })
        .prop_map(|weights| {
            let total: u32 = weights.iter().sum();
            let q: Vec<Rational> = weights
                .iter()
                .map(|&n| rat(n as i64, total as i64))
                .collect();
            MutationModel::tds(q).unwrap()
        })
}

fn id_model() -> impl Strategy<Value = MutationModel> {
    prop::collection::vec(0u32..5, 1..=3)
        .prop_filter("need some mass", |w| w.iter().any(|&n| n > 0))
        .prop_map(|weights| {
            let total: u32 = weights.iter().sum();
            let mut q = vec![rat(0, 1)];
            q.extend(weights.iter().map(|&n| rat(n as i64, total as i64)));
            MutationModel::id(q).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_sum_to_length_and_frequencies_normalize(s in any_string(), k in 1usize..6) {
        prop_assume!(k <= s.len());
        let counts = count_kmers(&s, k).unwrap();
        prop_assert_eq!(counts.total(), s.len() as u64);
        let freqs = counts.frequencies();
        let total: Rational = freqs.values().iter().sum();
        prop_assert_eq!(total, rat(1, 1));
        prop_assert!(freqs.is_shift_invariant());
    }

    #[test]
    fn counting_is_rotation_invariant(s in any_string(), k in 1usize..5, shift in 0usize..40) {
        prop_assume!(k <= s.len());
        let rotated = s.rotated(shift % s.len());
        let original_counts = count_kmers(&s, k).unwrap();
        let rotated_counts = count_kmers(&rotated, k).unwrap();
        prop_assert_eq!(original_counts.counts(), rotated_counts.counts());
    }

    #[test]
    fn lifting_preserves_short_word_frequencies(s in any_string(), k in 2usize..5) {
        prop_assume!(k <= s.len());
        let index = KmerIndex::new(s.alphabet(), k).unwrap();
        let x = count_kmers(&s, k).unwrap().frequencies();
        for j in 1..k {
            let short = count_kmers(&s, j).unwrap();
            let short_index = short.index().clone();
            let short_x = short.frequencies();
            for code in short_index.codes() {
                let w = short_index.decode(code);
                let lifted = lift_to_k(&w, &index).unwrap();
                prop_assert_eq!(&lifted.evaluate(&x).unwrap(), &short_x.values()[code]);
            }
        }
    }

    #[test]
    fn tandem_event_enumeration_is_complete(s in any_string(), model in tds_model()) {
        prop_assume!(s.len() >= model.support_bound());
        let e = enumerate_events(&s, &model, None).unwrap();
        let n = s.len();
        let asize = s.alphabet().size();
        let mut expected = 0;
        for l in model.support() {
            expected += if l == 0 { n * (asize - 1) } else { n };
        }
        prop_assert_eq!(e.events.len(), expected);
        for ev in &e.events {
            prop_assert!(ev.result.len() == n || ev.result.len() > n);
            prop_assert!(ev.probability > rat(0, 1));
        }
    }

    #[test]
    fn duplication_only_steps_conserve_existing_symbols(
        s in any_string(),
        seed in 0u64..1000,
    ) {
        let model = MutationModel::tds(vec![rat(0, 1), rat(1, 2), rat(1, 2)]).unwrap();
        prop_assume!(s.len() >= model.support_bound());
        let before = symbol_counts(s.data(), s.alphabet());
        let mut t = s.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let event = step_tds(&mut t, &model, &mut rng).unwrap();
        let after = symbol_counts(t.data(), t.alphabet());
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(a >= b, "a duplication erased a symbol");
        }
        let grown: u64 = after.iter().sum::<u64>() - before.iter().sum::<u64>();
        prop_assert_eq!(grown as usize, event.growth());
    }

    #[test]
    fn symbol_frequencies_are_a_martingale_under_duplication(
        s in any_string(),
        kind in prop_oneof![Just(ModelKind::Tds), Just(ModelKind::Id)],
    ) {
        let q = vec![rat(0, 1), rat(1, 3), rat(2, 3)];
        let model = match kind {
            ModelKind::Tds => MutationModel::tds(q).unwrap(),
            ModelKind::Id => MutationModel::id(q).unwrap(),
        };
        prop_assume!(s.len() >= model.support_bound());
        let expected = martingale_one_step_check(&s, &model).unwrap();
        let current = count_kmers(&s, 1).unwrap().frequencies();
        prop_assert_eq!(expected.as_slice(), current.values());
    }

    #[test]
    fn rate_matrices_always_verify(model in tds_model(), extra_k in 0usize..2) {
        let alphabet = Alphabet::binary();
        let k = model.support_bound() + extra_k;
        let index = KmerIndex::new(&alphabet, k).unwrap();
        let matrix = build_rate_matrix(&model, &index).unwrap();
        matrix.verify_structure().unwrap();
        for sum in matrix.column_sums() {
            prop_assert!(sum.is_zero());
        }
    }

    #[test]
    fn decay_constants_dominate_word_length(model in id_model(), w in 2usize..7) {
        let c = decay_constant(w, &model).unwrap();
        prop_assert!(c >= rat(w as i64, 1));
        prop_assert!(c <= rat(2 * (w as i64 - 1), 1));
    }

    #[test]
    fn interspersed_steps_grow_by_drawn_length(s in any_string(), seed in 0u64..1000) {
        let model = MutationModel::id(vec![rat(0, 1), rat(1, 2), rat(1, 2)]).unwrap();
        prop_assume!(s.len() >= model.support_bound());
        let mut t = s.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let event = step_id(&mut t, &model, &mut rng).unwrap();
        prop_assert_eq!(t.len(), s.len() + event.growth());
        prop_assert!(event.growth() == 1 || event.growth() == 2);
    }
}

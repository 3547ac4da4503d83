//! Exact agreement between the drift formulas and brute-force event
//! enumeration on a seeded grid of random strings and models. Agreement
//! is rational equality, word by word — no tolerances.

use dupsys_core::oracle::{compare_to_formula, expected_delta};
use dupsys_core::tds::delta_dup;
use dupsys_core::{count_kmers, rat, Alphabet, CircularString, KmerIndex, MutationModel, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_string(alphabet: &Alphabet, len: usize, rng: &mut ChaCha8Rng) -> CircularString {
    let word: Vec<u8> = (0..len)
        .map(|_| rng.random_range(0..alphabet.size()) as u8)
        .collect();
    CircularString::new(alphabet.clone(), word).unwrap()
}

#[test]
fn tandem_formulas_match_enumeration_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let models = [
        MutationModel::tds(vec![rat(1, 2), rat(1, 2)]).unwrap(),
        MutationModel::tds(vec![rat(1, 4), rat(1, 2), rat(1, 4)]).unwrap(),
        MutationModel::tds(vec![rat(0, 1), rat(1, 1)]).unwrap(),
        MutationModel::tds(vec![rat(1, 3), rat(1, 3), rat(1, 3)]).unwrap(),
    ];
    for alphabet in [Alphabet::binary(), Alphabet::dna()] {
        for _ in 0..6 {
            let len = rng.random_range(30..46);
            let s = random_string(&alphabet, len, &mut rng);
            for model in &models {
                let k_lo = model.support_bound();
                for k in k_lo..=(k_lo + 1) {
                    let mut cases: Vec<Option<usize>> =
                        model.support().into_iter().map(Some).collect();
                    cases.push(None);
                    for fixed in cases {
                        let report = compare_to_formula(&s, model, fixed, k).unwrap();
                        assert!(
                            !report.below_length_floor,
                            "grid strings must meet the length floor"
                        );
                        assert!(
                            report.agrees(),
                            "s = {}, model = {}, fixed = {fixed:?}, k = {k}: {:?}",
                            s.render(),
                            model.describe(),
                            report.discrepancies
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn interspersed_formulas_match_enumeration_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let models = [
        MutationModel::id(vec![rat(0, 1), rat(1, 1)]).unwrap(),
        MutationModel::id(vec![rat(0, 1), rat(1, 2), rat(1, 2)]).unwrap(),
        MutationModel::id(vec![rat(0, 1), rat(1, 3), rat(0, 1), rat(2, 3)]).unwrap(),
    ];
    let alphabet = Alphabet::dna();
    for _ in 0..6 {
        let len = rng.random_range(30..41);
        let s = random_string(&alphabet, len, &mut rng);
        for model in &models {
            for k in 1..=3 {
                let mut cases: Vec<Option<usize>> =
                    model.support().into_iter().map(Some).collect();
                cases.push(None);
                for fixed in cases {
                    let report = compare_to_formula(&s, model, fixed, k).unwrap();
                    assert!(
                        report.agrees(),
                        "s = {}, model = {}, fixed = {fixed:?}, k = {k}: {:?}",
                        s.render(),
                        model.describe(),
                        report.discrepancies
                    );
                }
            }
        }
    }
}

#[test]
fn interspersed_copies_longer_than_the_word_agree() {
    // Exercises the regime where the copy length reaches and exceeds k.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let alphabet = Alphabet::binary();
    let model = MutationModel::id(vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)])
        .unwrap();
    for _ in 0..4 {
        let s = random_string(&alphabet, rng.random_range(30..40), &mut rng);
        for k in 1..=3 {
            let report = compare_to_formula(&s, &model, Some(4), k).unwrap();
            assert!(report.agrees(), "k = {k}: {:?}", report.discrepancies);
        }
    }
}

#[test]
fn uniform_string_gains_one_repeated_pair_per_duplication() {
    // On A^30, every length-1 tandem duplication appends an A, creating
    // exactly one new AA window: the expected count change is 1, both by
    // enumeration and by the drift formula (whose creation term reduces
    // to the frequency of A, which is 1).
    let alphabet = Alphabet::dna();
    let s = CircularString::parse(&alphabet, &"A".repeat(30)).unwrap();
    let model = MutationModel::tds(vec![rat(0, 1), rat(1, 1)]).unwrap();
    let index = KmerIndex::new(&alphabet, 2).unwrap();
    let u = alphabet.parse_word("AA").unwrap();

    let oracle = expected_delta(&s, &model, Some(1), 2).unwrap();
    assert_eq!(oracle[index.encode(&u)], rat(1, 1));
    let total: Rational = oracle.iter().sum();
    assert_eq!(total, rat(1, 1), "one new window per unit of growth");

    let x = count_kmers(&s, 2).unwrap().frequencies();
    let formula = delta_dup(&u, 1, &index).unwrap().evaluate(&x).unwrap();
    assert_eq!(formula, rat(1, 1));
}

#[test]
fn absent_words_with_absent_precursors_never_appear() {
    // (AC)^15 contains no G anywhere, so no duplication can create GG;
    // both routes must report an exact zero change.
    let alphabet = Alphabet::dna();
    let s = CircularString::parse(&alphabet, &"AC".repeat(15)).unwrap();
    let model = MutationModel::tds(vec![rat(0, 1), rat(1, 1)]).unwrap();
    let index = KmerIndex::new(&alphabet, 2).unwrap();
    let u = alphabet.parse_word("GG").unwrap();

    let oracle = expected_delta(&s, &model, Some(1), 2).unwrap();
    assert_eq!(oracle[index.encode(&u)], rat(0, 1));
    let x = count_kmers(&s, 2).unwrap().frequencies();
    let formula = delta_dup(&u, 1, &index).unwrap().evaluate(&x).unwrap();
    assert_eq!(formula, rat(0, 1));
}

#[test]
fn short_strings_are_flagged_not_failed() {
    let alphabet = Alphabet::binary();
    let s = CircularString::parse(&alphabet, "010011").unwrap();
    let model = MutationModel::tds(vec![rat(1, 2), rat(1, 2)]).unwrap();
    let report = compare_to_formula(&s, &model, Some(1), 3).unwrap();
    assert!(report.below_length_floor);
}

//! `dupsys verify`: runs the frozen verification corpus.
//!
//! Two layers of checks share one reporting format:
//!
//! * **Property suites** re-derive analytic claims on randomized inputs
//!   with frozen seeds: formula-vs-enumeration agreement, rate-matrix
//!   structure, the symbol-frequency martingale, and the entropy bound
//!   chain.
//! * **Repro cases** rerun specific frozen experiments and compare the
//!   results against expected-value files.
//!
//! `--self-test` instead plants two known-wrong variants of the tandem
//! drift formula and checks that the machinery catches both: a
//! destruction miscount must produce enumeration discrepancies, and the
//! wrong short-word lifting convention must differ coefficient-by-
//! coefficient from the correct form. A self-test failure means the
//! verification layer itself is too weak to notice a planted bug.

use std::collections::BTreeMap;
use std::path::Path;

use dupsys_core::entropy::{binary_entropy, bound_chain, cap_singleton, id_binary_len1_entropy, SemiconstrainedMeasure};
use dupsys_core::id::{iid_deviation, ShortWordVector};
use dupsys_core::mutate::{martingale_one_step_check, simulate_sweep};
use dupsys_core::nullspace::null_space_limit;
use dupsys_core::oracle::{compare_to_formula, compare_to_miscount_control};
use dupsys_core::tds::{build_rate_matrix, delta_dup, delta_dup_suffix_lifted};
use dupsys_core::{
    count_kmers, rat, symbol_counts, Alphabet, CircularString, KmerFrequencies, KmerIndex,
    ModelKind, MutationModel, Rational,
};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{parse_rational, parse_raw, ExperimentConfig};
use crate::corpus::{check_embedded_corpus, check_on_disk_corpus, corpus_file};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub self_test: bool,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

/// Runs the verification suites (or the self-test) and prints one line
/// per suite. The process exit code is decided by the caller from
/// [`VerifyReport::all_passed`].
pub fn cmd_verify(self_test: bool, out_dir: Option<&Path>, quiet: bool) -> Result<VerifyReport> {
    let mut suites = Vec::new();
    run_suite(&mut suites, quiet, "corpus-integrity", suite_corpus_integrity);
    if self_test {
        run_suite(&mut suites, quiet, "self-test-miscount", suite_self_test_miscount);
        run_suite(
            &mut suites,
            quiet,
            "self-test-lifting",
            suite_self_test_lifting,
        );
    } else {
        run_suite(&mut suites, quiet, "oracle-tandem", suite_oracle_tandem);
        run_suite(
            &mut suites,
            quiet,
            "oracle-interspersed",
            suite_oracle_interspersed,
        );
        run_suite(&mut suites, quiet, "matrix-structure", suite_matrix_structure);
        run_suite(&mut suites, quiet, "martingale", suite_martingale);
        run_suite(&mut suites, quiet, "bound-chain", suite_bound_chain);
        for case in [
            "pair-limit-exact",
            "pair-limit-convergence",
            "product-limit-convergence",
            "uniform-capacity",
            "run-length-entropy",
        ] {
            run_suite(&mut suites, quiet, case, |_| run_repro_case(case));
        }
    }

    let report = VerifyReport { self_test, suites };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(
            dir.join("verify-report.json"),
            serde_json::to_string_pretty(&report)? + "\n",
        )?;
    }
    Ok(report)
}

fn run_suite(
    suites: &mut Vec<SuiteResult>,
    quiet: bool,
    name: &str,
    body: impl FnOnce(&str) -> Result<String>,
) {
    let result = match body(name) {
        Ok(detail) => SuiteResult {
            name: name.to_string(),
            passed: true,
            detail,
        },
        Err(e) => SuiteResult {
            name: name.to_string(),
            passed: false,
            detail: e.to_string(),
        },
    };
    if !quiet {
        println!(
            "{} {}: {}",
            if result.passed { "PASS" } else { "FAIL" },
            result.name,
            result.detail
        );
    }
    suites.push(result);
}

// ---------------------------------------------------------------------------
// shared helpers

fn suite_params(name: &str) -> Result<BTreeMap<String, String>> {
    parse_raw(corpus_file(name)?)
}

fn param<'a>(params: &'a BTreeMap<String, String>, file: &str, key: &str) -> Result<&'a str> {
    params
        .get(key)
        .map(|s| s.as_str())
        .ok_or_else(|| CliError::Suite(format!("{file}: missing key `{key}`")))
}

fn param_usize(params: &BTreeMap<String, String>, file: &str, key: &str) -> Result<usize> {
    param(params, file, key)?
        .parse()
        .map_err(|_| CliError::Suite(format!("{file}: `{key}` is not an integer")))
}

fn param_f64(params: &BTreeMap<String, String>, file: &str, key: &str) -> Result<f64> {
    param(params, file, key)?
        .parse()
        .map_err(|_| CliError::Suite(format!("{file}: `{key}` is not a number")))
}

fn param_rationals(
    params: &BTreeMap<String, String>,
    file: &str,
    key: &str,
) -> Result<Vec<Rational>> {
    param(params, file, key)?
        .split(',')
        .map(|piece| parse_rational(key, piece))
        .collect()
}

fn param_usizes(params: &BTreeMap<String, String>, file: &str, key: &str) -> Result<Vec<usize>> {
    param(params, file, key)?
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse()
                .map_err(|_| CliError::Suite(format!("{file}: `{key}` has a non-integer entry")))
        })
        .collect()
}

fn ternary() -> Alphabet {
    Alphabet::new(&['1', '2', '3']).expect("ternary alphabet is valid")
}

fn random_string(alphabet: &Alphabet, len: usize, rng: &mut ChaCha8Rng) -> CircularString {
    let data: Vec<u8> = (0..len)
        .map(|_| rng.random_range(0..alphabet.size()) as u8)
        .collect();
    CircularString::new(alphabet.clone(), data).expect("random word is over the alphabet")
}

// ---------------------------------------------------------------------------
// suites

fn suite_corpus_integrity(_name: &str) -> Result<String> {
    check_embedded_corpus()?;
    match check_on_disk_corpus()? {
        Some(n) => Ok(format!(
            "all embedded digests match; on-disk corpus present, {n} files match too"
        )),
        None => Ok("all embedded digests match; no on-disk corpus to cross-check".into()),
    }
}

fn suite_oracle_tandem(_name: &str) -> Result<String> {
    let file = "oracle-suite.conf";
    let params = suite_params(file)?;
    let seed = param_usize(&params, file, "seed")? as u64;
    let per_alphabet = param_usize(&params, file, "strings_per_alphabet")?;
    let min_len = param_usize(&params, file, "min_len")?;
    let max_len = param_usize(&params, file, "max_len")?;
    let q = param_rationals(&params, file, "tandem_q")?;
    let fixed_lens = param_usizes(&params, file, "tandem_fixed_lens")?;
    let k = param_usize(&params, file, "tandem_k")?;
    let model = MutationModel::new(ModelKind::Tds, q).map_err(CliError::from)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comparisons = 0usize;
    for alphabet in [Alphabet::binary(), ternary(), Alphabet::dna()] {
        for _ in 0..per_alphabet {
            let len = rng.random_range(min_len..=max_len);
            let s = random_string(&alphabet, len, &mut rng);
            for &l in &fixed_lens {
                let report = compare_to_formula(&s, &model, Some(l), k)?;
                if !report.agrees() {
                    return Err(CliError::Suite(format!(
                        "conditioned on event length {l}, enumeration and formula disagree \
                         on `{}` at {} words (first: {:?})",
                        s.render(),
                        report.discrepancies.len(),
                        report.discrepancies.first()
                    )));
                }
                comparisons += 1;
            }
            let report = compare_to_formula(&s, &model, None, k)?;
            if !report.agrees() {
                return Err(CliError::Suite(format!(
                    "full-model enumeration and formula disagree on `{}` at {} words",
                    s.render(),
                    report.discrepancies.len()
                )));
            }
            comparisons += 1;
        }
    }
    Ok(format!(
        "{comparisons} exact enumeration-vs-formula comparisons agree \
         (3 alphabets x {per_alphabet} strings, word length {k})"
    ))
}

fn suite_oracle_interspersed(_name: &str) -> Result<String> {
    let file = "oracle-suite.conf";
    let params = suite_params(file)?;
    let seed = param_usize(&params, file, "seed")? as u64;
    let per_alphabet = param_usize(&params, file, "strings_per_alphabet")?;
    let min_len = param_usize(&params, file, "min_len")?;
    let max_len = param_usize(&params, file, "max_len")?;
    let q = param_rationals(&params, file, "interspersed_q")?;
    let k_max = param_usize(&params, file, "interspersed_k_max")?;
    let model = MutationModel::new(ModelKind::Id, q).map_err(CliError::from)?;

    // A different stream than the tandem suite so the two do not share
    // strings (seed offset by the suite role).
    let mut rng = ChaCha8Rng::seed_from_u64(seed + 1);
    let mut comparisons = 0usize;
    for alphabet in [Alphabet::binary(), Alphabet::dna()] {
        for _ in 0..per_alphabet {
            let len = rng.random_range(min_len..=max_len);
            let s = random_string(&alphabet, len, &mut rng);
            for k in 1..=k_max {
                let report = compare_to_formula(&s, &model, None, k)?;
                if !report.agrees() {
                    return Err(CliError::Suite(format!(
                        "interspersed enumeration and formula disagree on `{}` \
                         at word length {k} ({} words)",
                        s.render(),
                        report.discrepancies.len()
                    )));
                }
                comparisons += 1;
            }
        }
    }
    Ok(format!(
        "{comparisons} exact enumeration-vs-formula comparisons agree \
         (2 alphabets x {per_alphabet} strings, word lengths 1..={k_max})"
    ))
}

fn suite_matrix_structure(_name: &str) -> Result<String> {
    let file = "structure-suite.conf";
    let params = suite_params(file)?;
    let k_max = param_usize(&params, file, "k_max")?;
    let alphabet_specs = param(&params, file, "alphabets")?;
    let model_specs = param(&params, file, "models")?;

    let mut alphabets = Vec::new();
    for spec in alphabet_specs.split(';') {
        let chars: Vec<char> = spec.trim().chars().collect();
        alphabets.push(Alphabet::new(&chars).map_err(CliError::from)?);
    }
    let mut models = Vec::new();
    for spec in model_specs.split(';') {
        let q: Vec<Rational> = spec
            .split(',')
            .map(|piece| parse_rational("models", piece))
            .collect::<Result<_>>()?;
        models.push(MutationModel::new(ModelKind::Tds, q).map_err(CliError::from)?);
    }

    let mut checked = 0usize;
    for alphabet in &alphabets {
        for model in &models {
            for k in model.support_bound()..=k_max {
                let index = KmerIndex::new(alphabet, k)?;
                let matrix = build_rate_matrix(model, &index)?;
                matrix.verify_structure()?;
                if matrix.column_sums().iter().any(|s| !s.is_zero()) {
                    return Err(CliError::Suite(format!(
                        "nonzero column sum in the rate matrix for {} over {alphabet} at k = {k}",
                        model.describe()
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} rate matrices have conservative sign structure and zero column sums"
    ))
}

fn suite_martingale(_name: &str) -> Result<String> {
    let file = "martingale-suite.conf";
    let params = suite_params(file)?;
    let seed = param_usize(&params, file, "seed")? as u64;
    let per_model = param_usize(&params, file, "strings_per_model")?;
    let min_len = param_usize(&params, file, "min_len")?;
    let max_len = param_usize(&params, file, "max_len")?;
    let tandem =
        MutationModel::new(ModelKind::Tds, param_rationals(&params, file, "tandem_q")?)
            .map_err(CliError::from)?;
    let interspersed = MutationModel::new(
        ModelKind::Id,
        param_rationals(&params, file, "interspersed_q")?,
    )
    .map_err(CliError::from)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    for model in [&tandem, &interspersed] {
        for alphabet in [Alphabet::binary(), Alphabet::dna()] {
            for _ in 0..per_model {
                let len = rng.random_range(min_len..=max_len);
                let s = random_string(&alphabet, len, &mut rng);
                let expected = martingale_one_step_check(&s, model)?;
                let n = rat(s.len() as i64, 1);
                let current: Vec<Rational> = symbol_counts(s.data(), &alphabet)
                    .iter()
                    .map(|&c| rat(c as i64, 1) / &n)
                    .collect();
                if expected != current {
                    return Err(CliError::Suite(format!(
                        "symbol frequencies of `{}` are not preserved in expectation \
                         under {}",
                        s.render(),
                        model.describe()
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} strings: expected symbol frequencies after one step equal \
         current frequencies exactly (both duplication-only kinds)"
    ))
}

fn suite_bound_chain(_name: &str) -> Result<String> {
    let file = "bound-chain-suite.conf";
    let params = suite_params(file)?;
    let alphas = param_rationals(&params, file, "alphas")?;
    let k_max = param_usize(&params, file, "k_max")?;
    let tolerance = param_f64(&params, file, "closed_form_tolerance")?;
    let alphabet = Alphabet::binary();

    for alpha in &alphas {
        let q = vec![alpha.clone(), rat(1, 1) - alpha];
        let model = MutationModel::new(ModelKind::Tds, q).map_err(CliError::from)?;

        // Shift invariance of the exact limiting frequencies at each k.
        for k in 2..=k_max.min(3) {
            let index = KmerIndex::new(&alphabet, k)?;
            let matrix = build_rate_matrix(&model, &index)?;
            let limit = null_space_limit(&matrix)?;
            let Some(stationary) = limit.stationary else {
                return Err(CliError::Suite(format!(
                    "limit not unique at alpha = {alpha}, k = {k} (nullity {})",
                    limit.nullity
                )));
            };
            if !stationary.is_shift_invariant() {
                return Err(CliError::Suite(format!(
                    "limiting frequencies at alpha = {alpha}, k = {k} are not shift-invariant"
                )));
            }
            // The measure constructor re-checks the same requirements.
            SemiconstrainedMeasure::new(stationary)?;
        }

        // Closed form at k = 2 and monotonicity up to k_max. The chain
        // call itself fails if any step increases.
        let report = bound_chain(&model, &alphabet, k_max)?;
        let cap2 = report.rows[0]
            .cap
            .ok_or_else(|| CliError::Suite(format!("no k = 2 bound at alpha = {alpha}")))?;
        let p = rat(2, 1) * alpha / (rat(1, 1) + rat(3, 1) * alpha);
        let closed = binary_entropy(p.to_f64().unwrap())?;
        if (cap2 - closed).abs() > tolerance {
            return Err(CliError::Suite(format!(
                "k = 2 bound at alpha = {alpha} is {cap2}, closed form gives {closed}"
            )));
        }
    }
    Ok(format!(
        "{} substitution rates: exact shift-invariant limits, closed-form match at \
         k = 2 within {tolerance:e}, chain nonincreasing to k = {k_max}",
        alphas.len()
    ))
}

// ---------------------------------------------------------------------------
// self-test: plant known-wrong formulas, demand they are caught

fn suite_self_test_miscount(_name: &str) -> Result<String> {
    let alphabet = Alphabet::dna();
    let mut rng = ChaCha8Rng::seed_from_u64(9090);
    let model = MutationModel::new(
        ModelKind::Tds,
        vec![rat(1, 5), rat(2, 5), rat(1, 5), rat(1, 5)],
    )
    .map_err(CliError::from)?;
    let mut caught = 0usize;
    for _ in 0..3 {
        let s = random_string(&alphabet, rng.random_range(30..=48), &mut rng);
        for fixed_len in [Some(1), Some(2), None] {
            let report = compare_to_miscount_control(&s, &model, fixed_len, 3)?;
            if report.agrees() {
                return Err(CliError::Suite(format!(
                    "planted destruction miscount was NOT caught on `{}` \
                     (conditioning {fixed_len:?}); the enumeration comparison is too weak",
                    s.render()
                )));
            }
            caught += 1;
        }
    }
    Ok(format!(
        "planted destruction miscount caught in all {caught} comparisons"
    ))
}

fn suite_self_test_lifting(_name: &str) -> Result<String> {
    let alphabet = Alphabet::dna();
    let index = KmerIndex::new(&alphabet, 3)?;
    let mut differing = 0usize;
    let mut total = 0usize;
    for l in [1usize, 2] {
        for code in index.codes() {
            let u = index.decode(code);
            let correct = delta_dup(&u, l, &index)?;
            let planted = delta_dup_suffix_lifted(&u, l, &index)?;
            let collect = |form: &dupsys_core::form::LinearForm| -> BTreeMap<usize, Rational> {
                form.terms().map(|(c, v)| (c, v.clone())).collect()
            };
            if collect(&correct) != collect(&planted) {
                differing += 1;
            }
            total += 1;
        }
    }
    if differing == 0 {
        return Err(CliError::Suite(
            "planted wrong lifting convention produced identical coefficients \
             everywhere; the coefficient-level check is too weak"
                .into(),
        ));
    }
    Ok(format!(
        "planted wrong lifting convention differs from the correct form on \
         {differing} of {total} (word, event-length) pairs and would be caught \
         by any coefficient-level comparison"
    ))
}

// ---------------------------------------------------------------------------
// repro cases

fn load_case(name: &str) -> Result<(ExperimentConfig, BTreeMap<String, String>, BTreeMap<String, String>)> {
    let conf = corpus_file(&format!("{name}.conf"))?;
    let expect = corpus_file(&format!("{name}.expect"))?;
    let (config, extras) = ExperimentConfig::parse_with_extras(
        conf,
        &[
            "check", "t0_small", "t1_small", "t0_large", "t1_large",
        ],
    )?;
    Ok((config, extras, parse_raw(expect)?))
}

/// Reruns one frozen case and compares against its expected values.
/// The detail string lists `metric expected measured` per comparison.
pub fn run_repro_case(name: &str) -> Result<String> {
    let (config, extras, expect) = load_case(name)?;
    let check = extras
        .get("check")
        .ok_or_else(|| CliError::Suite(format!("{name}.conf: missing `check`")))?;
    match check.as_str() {
        "stationary-exact" => repro_stationary_exact(name, &config, &expect),
        "mean-final-frequencies" => repro_mean_final(name, &config, &expect),
        "iid-deviation" => repro_iid_deviation(name, &config, &expect),
        "uniform-capacity" => repro_uniform_capacity(name, &config, &expect),
        "run-length-entropy" => repro_run_length_entropy(name, &extras, &expect),
        other => Err(CliError::Suite(format!(
            "{name}.conf: unknown check kind `{other}`"
        ))),
    }
}

fn expect_rationals(
    expect: &BTreeMap<String, String>,
    name: &str,
    key: &str,
) -> Result<Vec<Rational>> {
    expect
        .get(key)
        .ok_or_else(|| CliError::Suite(format!("{name}.expect: missing `{key}`")))?
        .split(',')
        .map(|piece| parse_rational(key, piece))
        .collect()
}

fn expect_f64(expect: &BTreeMap<String, String>, name: &str, key: &str) -> Result<f64> {
    expect
        .get(key)
        .ok_or_else(|| CliError::Suite(format!("{name}.expect: missing `{key}`")))?
        .parse()
        .map_err(|_| CliError::Suite(format!("{name}.expect: `{key}` is not a number")))
}

fn repro_stationary_exact(
    name: &str,
    config: &ExperimentConfig,
    expect: &BTreeMap<String, String>,
) -> Result<String> {
    let model = config.model()?;
    let alphabet = config.alphabet()?;
    let k = config.k()?;
    let expected = expect_rationals(expect, name, "stationary")?;

    let index = KmerIndex::new(alphabet, k)?;
    let matrix = build_rate_matrix(model, &index)?;
    matrix.verify_structure()?;
    let limit = null_space_limit(&matrix)?;
    let stationary = limit.stationary.ok_or_else(|| {
        CliError::Suite(format!(
            "{name}: limit is not unique (nullity {}), no stationary vector",
            limit.nullity
        ))
    })?;
    if stationary.values() != expected.as_slice() {
        return Err(CliError::Suite(format!(
            "{name}: stationary vector is [{}], expected [{}]",
            render_rationals(stationary.values()),
            render_rationals(&expected),
        )));
    }
    Ok(format!(
        "exact stationary vector equals [{}]",
        render_rationals(&expected)
    ))
}

fn render_rationals(values: &[Rational]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn repro_mean_final(
    name: &str,
    config: &ExperimentConfig,
    expect: &BTreeMap<String, String>,
) -> Result<String> {
    let model = config.model()?;
    let s0 = config.s0()?;
    let k = config.k()?;
    let steps = config.steps()?;
    let expected = expect_rationals(expect, name, "limit")?;
    let tolerance = expect_f64(expect, name, "tolerance")?;

    let results = simulate_sweep(
        s0,
        model,
        k,
        steps,
        config.record_every_or_default(),
        &config.seeds,
    )?;
    let dim = results[0].1.kmers.len();
    if expected.len() != dim {
        return Err(CliError::Suite(format!(
            "{name}.expect: `limit` has {} entries, the index has {dim}",
            expected.len()
        )));
    }
    let mut worst = 0f64;
    let mut means = Vec::with_capacity(dim);
    for code in 0..dim {
        let mean: f64 = results
            .iter()
            .map(|(_, r)| r.frequencies.last().expect("snapshots exist")[code])
            .sum::<f64>()
            / results.len() as f64;
        let target = expected[code].to_f64().unwrap();
        worst = worst.max((mean - target).abs());
        means.push(mean);
    }
    if worst > tolerance {
        return Err(CliError::Suite(format!(
            "{name}: seed-averaged final frequencies [{}] are off the exact limit by \
             {worst:.4} (> {tolerance})",
            means
                .iter()
                .map(|m| format!("{m:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    Ok(format!(
        "{} seeds x {steps} steps: max |mean final - limit| = {worst:.4} <= {tolerance}",
        config.seeds.len()
    ))
}

fn repro_iid_deviation(
    name: &str,
    config: &ExperimentConfig,
    expect: &BTreeMap<String, String>,
) -> Result<String> {
    let model = config.model()?;
    let s0 = config.s0()?;
    let k = config.k()?;
    let steps = config.steps()?;
    let pair_tolerance = expect_f64(expect, name, "pair_tolerance")?;
    let triple_tolerance = expect_f64(expect, name, "triple_tolerance")?;

    let results = simulate_sweep(
        s0,
        model,
        k,
        steps,
        config.record_every_or_default(),
        &config.seeds,
    )?;
    let mut worst_pair = 0f64;
    let mut worst_triple = 0f64;
    for (final_string, record) in &results {
        let x = ShortWordVector::<f64>::from_circular(final_string, 3)?;
        let report = iid_deviation(&x)?;
        let by_length = |len: usize| {
            report
                .max_by_length
                .iter()
                .find(|(l, _)| *l == len)
                .map(|&(_, v)| v)
                .unwrap_or(0.0)
        };
        let pair = by_length(2);
        let triple = by_length(3);
        if pair > pair_tolerance || triple > triple_tolerance {
            return Err(CliError::Suite(format!(
                "{name}: seed {} ended {steps} steps with pair deviation {pair:.4} \
                 (allowed {pair_tolerance}) and triple deviation {triple:.4} \
                 (allowed {triple_tolerance})",
                record.seed
            )));
        }
        worst_pair = worst_pair.max(pair);
        worst_triple = worst_triple.max(triple);
    }
    Ok(format!(
        "{} seeds: max pair deviation {worst_pair:.4} <= {pair_tolerance}, \
         max triple deviation {worst_triple:.4} <= {triple_tolerance}",
        config.seeds.len()
    ))
}

fn repro_uniform_capacity(
    name: &str,
    config: &ExperimentConfig,
    expect: &BTreeMap<String, String>,
) -> Result<String> {
    let alphabet = config.alphabet()?;
    let k = config.k()?;
    let expected = expect_f64(expect, name, "cap")?;

    let index = KmerIndex::new(alphabet, k)?;
    let size = index.size();
    let uniform = KmerFrequencies::from_values(
        index,
        vec![Rational::new(1.into(), (size as i64).into()); size],
    )?;
    let cap = cap_singleton(&SemiconstrainedMeasure::new(uniform)?)?;
    if cap != expected {
        return Err(CliError::Suite(format!(
            "{name}: capacity of the uniform order-{k} measure is {cap}, expected exactly {expected}"
        )));
    }
    Ok(format!(
        "uniform order-{k} measure over {alphabet} has capacity exactly {expected}"
    ))
}

fn repro_run_length_entropy(
    name: &str,
    extras: &BTreeMap<String, String>,
    expect: &BTreeMap<String, String>,
) -> Result<String> {
    let get = |key: &str| -> Result<u64> {
        extras
            .get(key)
            .ok_or_else(|| CliError::Suite(format!("{name}.conf: missing `{key}`")))?
            .parse()
            .map_err(|_| CliError::Suite(format!("{name}.conf: `{key}` is not an integer")))
    };
    let mut details = Vec::new();
    for size in ["small", "large"] {
        let t0 = get(&format!("t0_{size}"))?;
        let t1 = get(&format!("t1_{size}"))?;
        let expected = expect_f64(expect, name, &format!("value_{size}"))?;
        let tolerance = expect_f64(expect, name, &format!("tolerance_{size}"))?;
        let value = id_binary_len1_entropy(t0, t1)?;
        if (value - expected).abs() > tolerance {
            return Err(CliError::Suite(format!(
                "{name}: value for t0 = {t0}, t1 = {t1} is {value:.15}, \
                 expected {expected:.15} within {tolerance:e}"
            )));
        }
        details.push(format!(
            "t0 = {t0}, t1 = {t1}: {value:.12} within {tolerance:e} of {expected}"
        ));
    }
    Ok(details.join("; "))
}

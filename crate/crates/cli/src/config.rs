//! Flat `key = value` experiment configuration.
//!
//! Numeric values are parsed exactly: fractions like `1/4` become the
//! rational 1/4, and decimals like `0.25` become 25/100 (digits over a
//! power of ten), never a float. Lines starting with `#` are comments.
//!
//! Recognized keys: `alphabet`, `model`, `q`, `s0`, `k`, `steps`,
//! `seeds`, `record_every`, `k_max`, `alpha_grid`, `beta_grid`, `out`.
//! Unknown keys are rejected so typos cannot silently change an
//! experiment.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use dupsys_core::{Alphabet, CircularString, ModelKind, MutationModel, Rational};
use num_bigint::BigInt;

use crate::error::{CliError, Result};

const KNOWN_KEYS: &[&str] = &[
    "alphabet",
    "model",
    "q",
    "s0",
    "k",
    "steps",
    "seeds",
    "record_every",
    "k_max",
    "alpha_grid",
    "beta_grid",
    "out",
];

/// A parsed experiment description. Fields a command does not need may
/// be absent; the accessors below produce actionable errors when a
/// command requires one that is missing.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub alphabet: Option<Alphabet>,
    pub model: Option<MutationModel>,
    pub s0: Option<CircularString>,
    pub k: Option<usize>,
    pub steps: Option<u64>,
    pub seeds: Vec<u64>,
    pub record_every: Option<u64>,
    pub k_max: Option<usize>,
    pub alpha_grid: Vec<Rational>,
    pub beta_grid: Vec<Rational>,
    pub out: Option<PathBuf>,
}

/// Splits config text into a key -> value map, rejecting duplicate keys
/// and lines that are not `key = value`, comments, or blank.
pub fn parse_raw(text: &str) -> Result<BTreeMap<String, String>> {
    let mut raw = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Validation(format!(
                "line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if raw.insert(key.clone(), value).is_some() {
            return Err(CliError::Validation(format!(
                "line {}: key `{key}` appears twice",
                lineno + 1
            )));
        }
    }
    Ok(raw)
}

/// Parses one exact rational: `3`, `1/4`, or `0.25` (which becomes
/// 25/100). Scientific notation and other float syntax are rejected
/// because they cannot be read back exactly.
pub fn parse_rational(field: &str, text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = |hint: &str| {
        CliError::Validation(format!(
            "{field}: cannot parse `{text}` as an exact number ({hint}); \
             use an integer like 2, a fraction like 1/4, or a decimal like 0.25"
        ))
    };
    if text.is_empty() {
        return Err(bad("it is empty"));
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
        if d == BigInt::from(0) {
            return Err(bad("denominator is zero"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part),
        };
        if frac_part.is_empty()
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || !int_digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad("not plain decimal digits"));
        }
        let digits = format!(
            "{}{frac_part}",
            if int_digits.is_empty() { "0" } else { int_digits }
        );
        let numer = BigInt::from_str(&digits).map_err(|_| bad("bad digits"))?;
        let denom = BigInt::from(10).pow(frac_part.len() as u32);
        return Ok(Rational::new(BigInt::from(sign) * numer, denom));
    }
    let n = BigInt::from_str(text).map_err(|_| bad("not an integer"))?;
    Ok(Rational::from(n))
}

fn parse_rational_list(field: &str, text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|piece| parse_rational(field, piece))
        .collect()
}

fn parse_integer<T: FromStr>(field: &str, text: &str, expected: &str) -> Result<T> {
    text.trim().parse().map_err(|_| {
        CliError::Validation(format!("{field}: cannot parse `{}` as {expected}", text.trim()))
    })
}

fn parse_alphabet(text: &str) -> Result<Alphabet> {
    // Accept both a bare run of symbols ("ACGT") and a separated list
    // ("A, C, G, T").
    let chars: Vec<char> = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .collect();
    if chars.is_empty() {
        return Err(CliError::Validation(
            "alphabet: no symbols given; write e.g. `alphabet = 01` or `alphabet = ACGT`".into(),
        ));
    }
    Alphabet::new(&chars)
        .map_err(|e| CliError::Validation(format!("alphabet: {e}")))
}

impl ExperimentConfig {
    /// Parses config text, rejecting unknown keys.
    pub fn parse(text: &str) -> Result<Self> {
        let (config, extras) = Self::parse_with_extras(text, &[])?;
        debug_assert!(extras.is_empty());
        Ok(config)
    }

    /// Parses config text, additionally returning the values of the
    /// listed extra keys (used by the verification corpus, whose case
    /// files carry a few check-specific fields).
    pub fn parse_with_extras(
        text: &str,
        extra_keys: &[&str],
    ) -> Result<(Self, BTreeMap<String, String>)> {
        let mut raw = parse_raw(text)?;
        let mut extras = BTreeMap::new();
        for &key in extra_keys {
            if let Some(value) = raw.remove(key) {
                extras.insert(key.to_string(), value);
            }
        }
        for key in raw.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Validation(format!(
                    "unknown key `{key}`; recognized keys are {}",
                    KNOWN_KEYS.join(", ")
                )));
            }
        }

        let alphabet = match raw.get("alphabet") {
            Some(text) => Some(parse_alphabet(text)?),
            None => None,
        };

        let model = match (raw.get("model"), raw.get("q")) {
            (None, None) => None,
            (Some(_), None) => {
                return Err(CliError::Validation(
                    "model given without q; add a length distribution like `q = 1/4, 3/4`".into(),
                ))
            }
            (None, Some(_)) => {
                return Err(CliError::Validation(
                    "q given without model; add `model = tds` or `model = id`".into(),
                ))
            }
            (Some(kind_text), Some(q_text)) => {
                let kind = match kind_text.as_str() {
                    "tds" => ModelKind::Tds,
                    "id" => ModelKind::Id,
                    other => {
                        return Err(CliError::Validation(format!(
                            "model: `{other}` is not a model kind; use `tds` \
                             (tandem duplication + substitution) or `id` (interspersed duplication)"
                        )))
                    }
                };
                let q = parse_rational_list("q", q_text)?;
                Some(
                    MutationModel::new(kind, q)
                        .map_err(|e| CliError::Validation(format!("q: {e}")))?,
                )
            }
        };

        let s0 = match raw.get("s0") {
            None => None,
            Some(text) => {
                let alphabet = alphabet.as_ref().ok_or_else(|| {
                    CliError::Validation(
                        "s0 given without alphabet; add e.g. `alphabet = 01`".into(),
                    )
                })?;
                Some(
                    CircularString::parse(alphabet, text)
                        .map_err(|e| CliError::Validation(format!("s0: {e}")))?,
                )
            }
        };

        let k = match raw.get("k") {
            Some(text) => Some(parse_integer::<usize>("k", text, "a positive word length")?),
            None => None,
        };
        if let Some(k) = k {
            if k < 1 {
                return Err(CliError::Validation("k: word length must be >= 1".into()));
            }
            if let Some(s0) = &s0 {
                if k > s0.len() {
                    return Err(CliError::Validation(format!(
                        "k = {k} exceeds the initial string length {}; \
                         frequencies of words longer than the string are not defined",
                        s0.len()
                    )));
                }
            }
        }

        let steps = match raw.get("steps") {
            Some(text) => Some(parse_integer::<u64>("steps", text, "a step count")?),
            None => None,
        };

        let seeds = match raw.get("seeds") {
            Some(text) => {
                let seeds: Vec<u64> = text
                    .split(',')
                    .map(|piece| parse_integer::<u64>("seeds", piece, "an integer seed"))
                    .collect::<Result<_>>()?;
                if seeds.is_empty() {
                    return Err(CliError::Validation("seeds: list is empty".into()));
                }
                let mut sorted = seeds.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != seeds.len() {
                    return Err(CliError::Validation(
                        "seeds: list contains a repeated seed; \
                         repeated seeds produce identical trajectories"
                            .into(),
                    ));
                }
                seeds
            }
            None => vec![1],
        };

        let record_every = match raw.get("record_every") {
            Some(text) => {
                let value = parse_integer::<u64>("record_every", text, "a positive interval")?;
                if value < 1 {
                    return Err(CliError::Validation(
                        "record_every: snapshot interval must be >= 1".into(),
                    ));
                }
                Some(value)
            }
            None => None,
        };

        let k_max = match raw.get("k_max") {
            Some(text) => Some(parse_integer::<usize>("k_max", text, "a word length")?),
            None => None,
        };

        let alpha_grid = match raw.get("alpha_grid") {
            Some(text) => parse_rational_list("alpha_grid", text)?,
            None => Vec::new(),
        };
        let beta_grid = match raw.get("beta_grid") {
            Some(text) => parse_rational_list("beta_grid", text)?,
            None => Vec::new(),
        };

        let out = raw.get("out").map(PathBuf::from);

        Ok((
            ExperimentConfig {
                alphabet,
                model,
                s0,
                k,
                steps,
                seeds,
                record_every,
                k_max,
                alpha_grid,
                beta_grid,
                out,
            },
            extras,
        ))
    }

    pub fn alphabet(&self) -> Result<&Alphabet> {
        self.alphabet.as_ref().ok_or_else(|| {
            CliError::Validation("config needs `alphabet = ...` (e.g. 01 or ACGT)".into())
        })
    }

    pub fn model(&self) -> Result<&MutationModel> {
        self.model.as_ref().ok_or_else(|| {
            CliError::Validation(
                "config needs a model: `model = tds` or `model = id` plus `q = ...`".into(),
            )
        })
    }

    pub fn s0(&self) -> Result<&CircularString> {
        self.s0.as_ref().ok_or_else(|| {
            CliError::Validation("config needs an initial string `s0 = ...`".into())
        })
    }

    pub fn k(&self) -> Result<usize> {
        self.k.ok_or_else(|| {
            CliError::Validation("config needs a word length `k = ...`".into())
        })
    }

    pub fn steps(&self) -> Result<u64> {
        self.steps.ok_or_else(|| {
            CliError::Validation("config needs a step count `steps = ...`".into())
        })
    }

    /// Snapshot interval: explicit value, or about 100 snapshots per run.
    pub fn record_every_or_default(&self) -> u64 {
        self.record_every
            .unwrap_or_else(|| (self.steps.unwrap_or(0) / 100).max(1))
    }
}

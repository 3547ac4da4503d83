//! `dupsys entropy`: capacity bounds on the entropy rate of the
//! evolving sequence.
//!
//! For tandem models the limiting k-mer frequencies pin a semiconstrained
//! system whose capacity bounds the entropy rate; the bound is computed
//! for a chain of word lengths and, when grids are configured, swept
//! over substitution rates. For interspersed models the limit is a
//! product measure, so the word-level constraints collapse to the symbol
//! simplex; the command reports that directly, plus the run-length value
//! for the binary single-symbol-copy case.

use std::path::Path;

use dupsys_core::entropy::{bound_chain, id_binary_len1_entropy, EntropyReport};
use dupsys_core::{symbol_counts, Alphabet, ModelKind, MutationModel, Rational};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::csvio::{write_entropy_chain_csv, write_entropy_surface_csv, write_entropy_sweep_csv};
use crate::error::{CliError, Result};

/// Everything the entropy command computed, mirrored to JSON.
#[derive(Debug, Serialize)]
pub struct EntropyOutcome {
    pub kind: String,
    /// Bound chain for the configured model (tandem only).
    pub chain: Option<EntropyReport>,
    /// Substitution-rate sweep rows `(alpha, k, cap)`.
    pub sweep: Vec<(f64, usize, Option<f64>)>,
    /// Two-parameter surface rows `(alpha, beta, cap)`.
    pub surface: Vec<(f64, f64, Option<f64>)>,
    /// Present for interspersed models: why no chain is computed.
    pub notice: Option<String>,
    /// Run-length entropy value for the binary single-symbol
    /// interspersed case, when the config pins an initial string.
    pub run_length_value: Option<f64>,
}

/// Largest word length whose frequency vector stays comfortably inside
/// the exact-arithmetic budget, but never below the support bound.
fn default_k_max(alphabet: &Alphabet, model: &MutationModel) -> usize {
    let mut k = 1;
    let mut size = alphabet.size();
    while size * alphabet.size() <= 256 {
        size *= alphabet.size();
        k += 1;
    }
    model.support_bound().max(k.min(model.support_bound() + 2))
}

fn rational_to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn cmd_entropy(
    config: &ExperimentConfig,
    out_dir: &Path,
    quiet: bool,
) -> Result<EntropyOutcome> {
    let model = config.model()?;
    std::fs::create_dir_all(out_dir)?;
    match model.kind() {
        ModelKind::Id => cmd_entropy_id(config, model, out_dir, quiet),
        ModelKind::Tds => cmd_entropy_tds(config, model, out_dir, quiet),
    }
}

fn cmd_entropy_id(
    config: &ExperimentConfig,
    model: &MutationModel,
    out_dir: &Path,
    quiet: bool,
) -> Result<EntropyOutcome> {
    let mut notice = String::from(
        "interspersed duplication drives every word frequency toward the \
         product of the symbol frequencies, so the word-level constraints \
         collapse to the symbol simplex and impose no capacity bound below \
         the trivial 1; the entropy of the process itself comes from where \
         each copy lands, not from word composition.",
    );
    let mut run_length_value = None;
    if model.support() == [1] {
        if let (Ok(alphabet), Some(s0)) = (config.alphabet(), &config.s0) {
            if alphabet.size() == 2 {
                let counts = symbol_counts(s0.data(), alphabet);
                if counts.iter().all(|&c| c > 0) {
                    let value = id_binary_len1_entropy(counts[0], counts[1])?;
                    notice.push_str(&format!(
                        " For single-symbol copies on a binary string the exact \
                         entropy is available by run-length counting: with {} zeros \
                         and {} ones it is {:.12} bits per symbol.",
                        counts[0], counts[1], value
                    ));
                    run_length_value = Some(value);
                }
            }
        }
    }

    let outcome = EntropyOutcome {
        kind: "interspersed".into(),
        chain: None,
        sweep: Vec::new(),
        surface: Vec::new(),
        notice: Some(notice.clone()),
        run_length_value,
    };
    std::fs::write(out_dir.join("entropy-id.txt"), notice.clone() + "\n")?;
    std::fs::write(
        out_dir.join("entropy.json"),
        serde_json::to_string_pretty(&outcome)? + "\n",
    )?;
    if !quiet {
        println!("{notice}");
        println!("wrote {}", out_dir.join("entropy.json").display());
    }
    Ok(outcome)
}

fn cmd_entropy_tds(
    config: &ExperimentConfig,
    model: &MutationModel,
    out_dir: &Path,
    quiet: bool,
) -> Result<EntropyOutcome> {
    let alphabet = config.alphabet()?;
    let k_max = config.k_max.unwrap_or_else(|| default_k_max(alphabet, model));

    let chain = bound_chain(model, alphabet, k_max)?;
    write_entropy_chain_csv(&out_dir.join("entropy-chain.csv"), &chain)?;
    if !quiet {
        for row in &chain.rows {
            match row.cap {
                Some(cap) => println!("k = {}: cap = {:.12}", row.k, cap),
                None => println!(
                    "k = {}: limit not unique (nullity {}), no bound at this order",
                    row.k, row.nullity
                ),
            }
        }
    }

    // Substitution-rate sweep: q = [alpha, 1 - alpha] over the grid.
    let mut sweep = Vec::new();
    if !config.alpha_grid.is_empty() && config.beta_grid.is_empty() {
        let reports: Vec<(f64, EntropyReport)> = config
            .alpha_grid
            .par_iter()
            .map(|alpha| -> Result<(f64, EntropyReport)> {
                let q = vec![alpha.clone(), Rational::one() - alpha];
                let swept = MutationModel::new(ModelKind::Tds, q).map_err(|e| {
                    CliError::Validation(format!("alpha_grid value {alpha}: {e}"))
                })?;
                Ok((rational_to_f64(alpha), bound_chain(&swept, alphabet, k_max)?))
            })
            .collect::<Result<_>>()?;
        for (alpha, report) in reports {
            for row in &report.rows {
                sweep.push((alpha, row.k, row.cap));
            }
        }
        write_entropy_sweep_csv(&out_dir.join("entropy-sweep.csv"), &sweep)?;
        if !quiet {
            println!(
                "swept {} substitution rates, wrote {}",
                config.alpha_grid.len(),
                out_dir.join("entropy-sweep.csv").display()
            );
        }
    }

    // Two-parameter surface: q = [1 - alpha - beta, alpha, beta] at the
    // configured word length.
    let mut surface = Vec::new();
    if !config.alpha_grid.is_empty() && !config.beta_grid.is_empty() {
        let k = config.k.unwrap_or(3);
        let mut grid = Vec::new();
        for alpha in &config.alpha_grid {
            for beta in &config.beta_grid {
                if alpha + beta <= Rational::one()
                    && alpha >= &Rational::zero()
                    && beta >= &Rational::zero()
                {
                    grid.push((alpha.clone(), beta.clone()));
                }
            }
        }
        let rows: Vec<(f64, f64, Option<f64>)> = grid
            .par_iter()
            .map(|(alpha, beta)| -> Result<(f64, f64, Option<f64>)> {
                if alpha.is_zero() && beta.is_zero() {
                    // Substitution-only corner: the string never grows and
                    // no duplication structure exists to bound.
                    return Ok((0.0, 0.0, None));
                }
                let q0 = Rational::one() - alpha - beta;
                let swept = MutationModel::new(ModelKind::Tds, vec![q0, alpha.clone(), beta.clone()])
                    .map_err(|e| {
                        CliError::Validation(format!(
                            "surface point alpha = {alpha}, beta = {beta}: {e}"
                        ))
                    })?;
                let report = bound_chain(&swept, alphabet, k.max(swept.support_bound()))?;
                let cap = report.rows.last().and_then(|row| row.cap);
                Ok((rational_to_f64(alpha), rational_to_f64(beta), cap))
            })
            .collect::<Result<_>>()?;
        surface = rows;
        write_entropy_surface_csv(&out_dir.join("entropy-surface.csv"), &surface)?;
        if !quiet {
            println!(
                "computed {} surface points, wrote {}",
                surface.len(),
                out_dir.join("entropy-surface.csv").display()
            );
        }
    }

    let outcome = EntropyOutcome {
        kind: "tandem".into(),
        chain: Some(chain),
        sweep,
        surface,
        notice: None,
        run_length_value: None,
    };
    std::fs::write(
        out_dir.join("entropy.json"),
        serde_json::to_string_pretty(&outcome)? + "\n",
    )?;
    Ok(outcome)
}

//! `dupsys analyze`: exact rate-matrix analysis of a tandem model.

use std::path::Path;

use dupsys_core::nullspace::null_space_limit;
use dupsys_core::report::AnalysisDocument;
use dupsys_core::tds::build_rate_matrix;
use dupsys_core::KmerIndex;

use crate::config::ExperimentConfig;
use crate::error::Result;

/// Builds the k-mer rate matrix, verifies its structure, computes its
/// exact null space, and writes the analysis as text and JSON.
pub fn cmd_analyze(
    config: &ExperimentConfig,
    out_dir: &Path,
    quiet: bool,
) -> Result<AnalysisDocument> {
    let model = config.model()?;
    let alphabet = config.alphabet()?;
    let k = config.k()?;

    let index = KmerIndex::new(alphabet, k)?;
    let matrix = build_rate_matrix(model, &index)?;
    matrix.verify_structure()?;
    let limit = null_space_limit(&matrix)?;
    let document = AnalysisDocument::new(model, &matrix, &limit);

    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("analysis.txt"), document.render_text())?;
    std::fs::write(
        out_dir.join("analysis.json"),
        serde_json::to_string_pretty(&document)? + "\n",
    )?;

    if !quiet {
        print!("{}", document.render_text());
        println!("wrote {}", out_dir.join("analysis.txt").display());
    }
    Ok(document)
}

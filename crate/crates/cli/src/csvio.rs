//! CSV output with a deterministic byte layout.
//!
//! Floats are printed as `{:.16e}` (17 significant digits), which is
//! enough for an exact f64 round trip, so rerunning a seeded experiment
//! reproduces its output files byte for byte.

use std::path::Path;

use dupsys_core::entropy::EntropyReport;
use dupsys_core::mutate::TrajectoryRecord;

use crate::error::Result;

/// Fixed float rendering used in every CSV cell holding a real number.
pub fn render_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes one trajectory as long-format rows `seed,step,length,kmer,frequency`.
pub fn write_trajectory_csv(path: &Path, record: &TrajectoryRecord) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["seed", "step", "length", "kmer", "frequency"])?;
    for (row, &step) in record.steps.iter().enumerate() {
        for (col, kmer) in record.kmers.iter().enumerate() {
            writer.write_record([
                record.seed.to_string(),
                step.to_string(),
                record.lengths[row].to_string(),
                kmer.clone(),
                render_float(record.frequencies[row][col]),
            ])?;
        }
    }
    writer.flush().map_err(std::io::Error::from)?;
    Ok(())
}

/// One parsed trajectory CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub seed: u64,
    pub step: u64,
    pub length: u64,
    pub kmer: String,
    pub frequency: f64,
}

/// Reads back a file written by [`write_trajectory_csv`].
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<TrajectoryRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for result in reader.records() {
        let record = result?;
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let parse_u64 = |i: usize| -> Result<u64> {
            field(i).parse().map_err(|_| {
                crate::error::CliError::Io(format!(
                    "{}: bad integer in column {i}: `{}`",
                    path.display(),
                    field(i)
                ))
            })
        };
        rows.push(TrajectoryRow {
            seed: parse_u64(0)?,
            step: parse_u64(1)?,
            length: parse_u64(2)?,
            kmer: field(3),
            frequency: field(4).parse().map_err(|_| {
                crate::error::CliError::Io(format!(
                    "{}: bad float `{}`",
                    path.display(),
                    field(4)
                ))
            })?,
        });
    }
    Ok(rows)
}

/// Writes an entropy bound chain as rows `k,nullity,cap`; the cap cell
/// is left empty at orders where the limit is not unique.
pub fn write_entropy_chain_csv(path: &Path, report: &EntropyReport) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["k", "nullity", "cap"])?;
    for row in &report.rows {
        writer.write_record([
            row.k.to_string(),
            row.nullity.to_string(),
            row.cap.map(render_float).unwrap_or_default(),
        ])?;
    }
    writer.flush().map_err(std::io::Error::from)?;
    Ok(())
}

/// Writes substitution-rate sweep rows `alpha,k,cap`.
pub fn write_entropy_sweep_csv(path: &Path, rows: &[(f64, usize, Option<f64>)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["alpha", "k", "cap"])?;
    for &(alpha, k, cap) in rows {
        writer.write_record([
            render_float(alpha),
            k.to_string(),
            cap.map(render_float).unwrap_or_default(),
        ])?;
    }
    writer.flush().map_err(std::io::Error::from)?;
    Ok(())
}

/// Writes two-parameter surface rows `alpha,beta,cap`.
pub fn write_entropy_surface_csv(path: &Path, rows: &[(f64, f64, Option<f64>)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["alpha", "beta", "cap"])?;
    for &(alpha, beta, cap) in rows {
        writer.write_record([
            render_float(alpha),
            render_float(beta),
            cap.map(render_float).unwrap_or_default(),
        ])?;
    }
    writer.flush().map_err(std::io::Error::from)?;
    Ok(())
}

//! `dupsys simulate`: seeded trajectories with k-mer frequency snapshots.

use std::path::{Path, PathBuf};

use dupsys_core::mutate::simulate_sweep;

use crate::config::ExperimentConfig;
use crate::csvio::write_trajectory_csv;
use crate::error::Result;

/// Runs every configured seed (in parallel) and writes one CSV and one
/// JSON file per trajectory. Returns the paths written, in seed order.
pub fn cmd_simulate(
    config: &ExperimentConfig,
    out_dir: &Path,
    quiet: bool,
) -> Result<Vec<PathBuf>> {
    let model = config.model()?;
    let s0 = config.s0()?;
    let k = config.k()?;
    let steps = config.steps()?;
    let record_every = config.record_every_or_default();

    let results = simulate_sweep(s0, model, k, steps, record_every, &config.seeds)?;

    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (final_string, record) in &results {
        let csv_path = out_dir.join(format!("trajectory-seed{}.csv", record.seed));
        write_trajectory_csv(&csv_path, record)?;
        let json_path = out_dir.join(format!("trajectory-seed{}.json", record.seed));
        std::fs::write(&json_path, serde_json::to_string_pretty(record)? + "\n")?;
        if !quiet {
            println!(
                "seed {}: {} steps, length {} -> {}, wrote {}",
                record.seed,
                steps,
                s0.len(),
                final_string.len(),
                csv_path.display()
            );
        }
        written.push(csv_path);
        written.push(json_path);
    }

    if !quiet {
        let index_size = results[0].1.kmers.len();
        print!("mean final frequencies:");
        for code in 0..index_size {
            let mean: f64 = results
                .iter()
                .map(|(_, r)| r.frequencies.last().expect("at least one snapshot")[code])
                .sum::<f64>()
                / results.len() as f64;
            print!(" {}={:.6}", results[0].1.kmers[code], mean);
        }
        println!();
    }
    Ok(written)
}

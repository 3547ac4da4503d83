use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dupsys_cli::commands::{cmd_analyze, cmd_entropy, cmd_simulate, cmd_verify};
use dupsys_cli::config::ExperimentConfig;
use dupsys_cli::error::{CliError, Result};

/// Stochastic string-duplication systems: simulate seeded trajectories,
/// compute exact limiting k-mer frequencies, bound the entropy rate, and
/// verify the whole stack against a frozen corpus.
#[derive(Parser)]
#[command(name = "dupsys", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded mutation trajectories and write k-mer frequency
    /// snapshots as CSV and JSON.
    Simulate {
        /// Experiment description (flat `key = value` file).
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: `out` next to the config, or the
        /// config's own `out =` entry).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the configured seed list with seeds 1..=N.
        #[arg(long)]
        seeds: Option<u64>,
        /// Suppress progress output.
        #[arg(long)]
        quiet: bool,
    },
    /// Build the exact k-mer rate matrix of a tandem model, compute its
    /// null space, and report the limiting frequencies.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Compute entropy-rate bounds from the limiting frequencies.
    Entropy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Run the frozen verification corpus: property suites plus exact
    /// and statistical repro cases. Exits 2 on any failure.
    Verify {
        /// Where to write `verify-report.json` (optional).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Instead of the suites, plant two known-wrong formula variants
        /// and require the machinery to catch both.
        #[arg(long)]
        self_test: bool,
        #[arg(long)]
        quiet: bool,
    },
}

fn load_config(path: &PathBuf, seeds_override: Option<u64>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(n) = seeds_override {
        if n < 1 {
            return Err(CliError::Validation(
                "--seeds must be at least 1".into(),
            ));
        }
        config.seeds = (1..=n).collect();
    }
    Ok(config)
}

fn out_dir(flag: Option<PathBuf>, config: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            config,
            out,
            seeds,
            quiet,
        } => {
            let config = load_config(&config, seeds)?;
            cmd_simulate(&config, &out_dir(out, &config), quiet)?;
            Ok(())
        }
        Command::Analyze { config, out, quiet } => {
            let config = load_config(&config, None)?;
            cmd_analyze(&config, &out_dir(out, &config), quiet)?;
            Ok(())
        }
        Command::Entropy { config, out, quiet } => {
            let config = load_config(&config, None)?;
            cmd_entropy(&config, &out_dir(out, &config), quiet)?;
            Ok(())
        }
        Command::Verify {
            out,
            self_test,
            quiet,
        } => {
            let report = cmd_verify(self_test, out.as_deref(), quiet)?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::Suite(format!(
                    "{} of {} suites failed",
                    report.suites.iter().filter(|s| !s.passed).count(),
                    report.suites.len()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

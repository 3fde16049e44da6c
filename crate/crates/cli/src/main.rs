use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use heavytail_core::harness::{
    default_config, registered, run_experiment, verify_manifest, ExperimentConfig, OUTPUT_DIR_ENV,
};

/// Seeded Monte Carlo experiments for critical percolation on heavy-tailed
/// configuration models.
#[derive(Parser)]
#[command(name = "heavytail-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Print the full aggregate JSON instead of the summary table.
        #[arg(long)]
        json: bool,
    },
    /// List registered experiments.
    List {
        /// Print each experiment's default config as JSON.
        #[arg(long)]
        defaults: bool,
    },
    /// Re-run a manifest's config and compare output digests.
    Verify {
        manifest: PathBuf,
        /// Where the re-run writes its files (default: <manifest dir>/verify).
        #[arg(long)]
        scratch: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config, json } => {
            let cfg = ExperimentConfig::load(&config).with_context(|| format!("reading {}", config.display()))?;
            let (manifest, out) = run_experiment(&cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&out.aggregate)?);
            } else {
                println!("experiment {} (seed {})", cfg.experiment, cfg.seed);
                for (k, v) in &out.aggregate.summary {
                    println!("  {k:<40} {v:.6}");
                }
                for note in &out.aggregate.notes {
                    println!("  note: {note}");
                }
            }
            println!(
                "wrote {} rows to {} in {:.1}s ({} overrides the directory)",
                out.rows.len(),
                manifest.output_dir.display(),
                manifest.wall_time_secs,
                OUTPUT_DIR_ENV
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::List { defaults } => {
            for info in registered() {
                if defaults {
                    println!("{}", default_config(info.name)?.to_json()?);
                } else {
                    println!("{:<24} {}", info.name, info.description);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { manifest, scratch } => {
            let scratch = scratch.unwrap_or_else(|| {
                manifest.parent().map(|p| p.join("verify")).unwrap_or_else(|| PathBuf::from("verify"))
            });
            let report = verify_manifest(&manifest, &scratch)?;
            for (file, (old, new)) in &report.files {
                let status = if old == new { "ok" } else { "MISMATCH" };
                println!("{file:<16} {status}  recorded {old}  rerun {new}");
            }
            Ok(if report.matches { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

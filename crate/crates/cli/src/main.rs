//! `genlimit` — run bound-verification scenarios, parameter sweeps, and the
//! brute-force minimax oracle from the command line.
//!
//! Exit codes: 0 all bounds hold, 1 some bound violated, 2 configuration
//! error. `GENLIMIT_THREADS` caps sweep parallelism.

use anyhow::Context;
use clap::{Parser, Subcommand};
use genlimit_core::config::{ClassConfig, ScenarioConfig};
use genlimit_core::verify::{exit_code, sweep, verify, verify_seed, SweepRange};
use genlimit_core::{oracle, report, Error};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "genlimit",
    about = "Mistake-bounded language generation harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and verify every applicable bound.
    Run {
        /// Scenario JSON file.
        #[arg(long)]
        scenario: PathBuf,
        /// Override the scenario's seed list with a single seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the bound report CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-game transcript CSVs (one file per seed) into this
        /// directory.
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Expand parameter ranges over a scenario template and run them all.
    Sweep {
        /// Scenario template JSON file.
        #[arg(long)]
        template: PathBuf,
        /// Range `key=a..b` or `key=v1,v2,...` (dotted JSON path); repeatable.
        #[arg(long = "range")]
        ranges: Vec<String>,
        /// Write the merged CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimax mistake value of a small class by game-tree search.
    Oracle {
        /// Class JSON file.
        #[arg(long)]
        class: PathBuf,
        /// Search depth (number of game steps).
        #[arg(long)]
        depth: u32,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // configuration and I/O problems exit 2; bound violations are
            // signalled through the Ok path
            ExitCode::from(2)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            seed,
            out,
            transcripts,
        } => {
            let cfg = ScenarioConfig::from_path(&scenario)
                .with_context(|| format!("loading {}", scenario.display()))?;
            let reports = match seed {
                Some(seed) => vec![verify_seed(&cfg, seed)?],
                None => verify(&cfg)?,
            };
            for r in &reports {
                println!("{}", report::summarize(r));
            }
            if let Some(out) = out {
                report::write_reports_csv(&reports, &out)?;
            }
            if let Some(dir) = transcripts {
                std::fs::create_dir_all(&dir)?;
                for r in &reports {
                    let path = dir.join(format!("{}_seed{}.csv", cfg.name, r.seed));
                    std::fs::write(path, r.transcript.to_csv()?)?;
                }
            }
            Ok(ExitCode::from(exit_code(&reports) as u8))
        }
        Command::Sweep {
            template,
            ranges,
            out,
        } => {
            let cfg = ScenarioConfig::from_path(&template)
                .with_context(|| format!("loading {}", template.display()))?;
            let ranges = ranges
                .iter()
                .map(|r| SweepRange::parse(r))
                .collect::<Result<Vec<_>, Error>>()?;
            let reports = sweep(&cfg, &ranges)?;
            for r in &reports {
                println!("{}", report::summarize(r));
            }
            if let Some(out) = out {
                report::write_reports_csv(&reports, &out)?;
            }
            Ok(ExitCode::from(exit_code(&reports) as u8))
        }
        Command::Oracle { class, depth } => {
            let text = std::fs::read_to_string(&class)
                .with_context(|| format!("loading {}", class.display()))?;
            let cfg: ClassConfig = serde_json_from(&text)?;
            let resolved = cfg.resolve(0)?;
            let value = oracle::minimax_oracle(resolved.languages(), depth)?;
            println!("minimax mistakes (depth {depth}): {value}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn serde_json_from(text: &str) -> anyhow::Result<ClassConfig> {
    Ok(genlimit_core::config::class_from_json(text)?)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use biproximal::commands::{
    cmd_estimate, cmd_replicate, cmd_sensitivity, cmd_simulate, emit_bytes, emit_json, load_json,
    with_workers, write_sensitivity_csv, RunConfig,
};
use biproximal::experiments::StudyPlan;
use biproximal::simulation::ScenarioConfig;
use biproximal::Result;

/// Bidirectional proximal causal inference.
///
/// Exit codes: 0 success, 2 configuration error, 3 data error,
/// 4 estimation error, 5 I/O error.
#[derive(Parser)]
#[command(name = "biproximal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate both effects with bootstrap intervals (JSON output).
    Estimate(DataArgs),
    /// Sensitivity-adjusted estimates over an (R_w, R_z) grid (CSV output).
    Sensitivity(DataArgs),
    /// Generate a sample from a scenario config (CSV output).
    Simulate {
        /// Scenario config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Include the unobserved confounder U as a last column.
        #[arg(long)]
        debug_u: bool,
    },
    /// Run a Monte Carlo study plan.
    Replicate {
        /// Study plan (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory for raw.csv, summary.csv and manifest.json.
        #[arg(long)]
        out: PathBuf,
        /// Override the plan's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the plan's worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Run config (JSON); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input CSV with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the bootstrap seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the bootstrap.
    #[arg(long)]
    workers: Option<usize>,
}

impl DataArgs {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg: RunConfig = match &self.config {
            Some(path) => load_json(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.bootstrap.seed = seed;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => {
            let cfg = args.run_config()?;
            let report = with_workers(args.workers, || cmd_estimate(&cfg, &args.data))??;
            emit_json(&report, args.out.as_deref())
        }
        Command::Sensitivity(args) => {
            let cfg = args.run_config()?;
            let report = with_workers(args.workers, || cmd_sensitivity(&cfg, &args.data))??;
            let mut csv = Vec::new();
            write_sensitivity_csv(&report, &mut csv)?;
            emit_bytes(&csv, args.out.as_deref())?;
            if let Some(out) = &args.out {
                emit_json(&report, Some(&out.with_extension("json")))?;
            }
            Ok(())
        }
        Command::Simulate {
            config,
            out,
            seed,
            debug_u,
        } => {
            let mut cfg: ScenarioConfig = load_json(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            emit_bytes(&cmd_simulate(&cfg, debug_u)?, out.as_deref())
        }
        Command::Replicate {
            config,
            out,
            seed,
            workers,
        } => {
            let mut plan: StudyPlan = load_json(&config)?;
            if let Some(seed) = seed {
                plan.master_seed = seed;
            }
            if workers.is_some() {
                plan.workers = workers;
            }
            let outputs = cmd_replicate(&plan, &out)?;
            eprintln!(
                "wrote {}, {} and {}",
                outputs.raw.display(),
                outputs.summary.display(),
                outputs.manifest.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

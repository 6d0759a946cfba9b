//! `secsched`: run, sweep and validate the secure-scheduling simulator.
//!
//! Exit codes: 0 success, 1 configuration error, 2 invariant violation or
//! failed validation, 3 I/O error.

mod commands;
mod error;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{RunArgs, SweepArgs, ValidateArgs};

#[derive(Debug, Parser)]
#[command(name = "secsched", version, about = "Cross-layer secure scheduling simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario and write a one-row summary CSV.
    Run {
        /// Scenario file (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Summary CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a per-slot trace CSV.
        #[arg(long)]
        trace: bool,
        /// Trace path; defaults to `<out stem>.trace.csv`, or `trace.csv`.
        #[arg(long, requires = "trace")]
        trace_out: Option<PathBuf>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a scenario across one parameter axis.
    Sweep {
        /// Sweep file (TOML) with `axis`, `values`, optional `seed_policy` and a `[base]` scenario.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Points run concurrently; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compare the designed outage level with a Monte-Carlo estimate for every
    /// interior data fraction.
    ValidateOutage {
        /// Take parameters from a scenario file; explicit flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to 6.
        #[arg(long)]
        n_antennas: Option<usize>,
        /// Defaults to 3.
        #[arg(long)]
        n_eves: Option<usize>,
        /// Target outage level; defaults to 0.1.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        colluding: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Ratio grid `k / steps`, `k = 0..=steps`; defaults to 20.
        #[arg(long)]
        ratio_steps: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, out, trace, trace_out, seed } => commands::cmd_run(&RunArgs {
            config,
            out: out.as_deref(),
            trace: *trace,
            trace_out: trace_out.as_deref(),
            seed: *seed,
        }),
        Command::Sweep { config, out, seed, jobs } => {
            commands::cmd_sweep(&SweepArgs { config, out: out.as_deref(), seed: *seed, jobs: *jobs })
        }
        Command::ValidateOutage { config, out, n_antennas, n_eves, eta, colluding, samples, seed, ratio_steps } => {
            commands::cmd_validate_outage(&ValidateArgs {
                config: config.as_deref(),
                out: out.as_deref(),
                n_antennas: *n_antennas,
                n_eves: *n_eves,
                eta: *eta,
                colluding: *colluding,
                samples: *samples,
                seed: *seed,
                ratio_steps: *ratio_steps,
            })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("secsched: {e}");
            e.exit_code()
        }
    }
}

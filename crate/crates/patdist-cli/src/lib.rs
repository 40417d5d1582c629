//! Command line front end: exact cost distributions, algorithm comparisons,
//! automaton size sweeps, enumeration-based verification, Monte Carlo
//! simulation, and distribution statistics. Data goes to standard output or
//! `--out`; diagnostics go to standard error; the exit code is zero exactly
//! when every requested computation and internal check passed.

use clap::{Parser, Subcommand};

pub mod commands;
pub mod model;
pub mod output;

pub use commands::{verify_difference_case, verify_distribution_case, Counterexample};

/// Fallback order for the construction state cap: flag, then the
/// PATDIST_STATE_CAP environment variable, then the library default.
pub fn resolve_state_cap(flag: Option<usize>) -> anyhow::Result<usize> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("PATDIST_STATE_CAP") {
        Ok(raw) => raw
            .parse()
            .map_err(|_| anyhow::anyhow!("PATDIST_STATE_CAP is not a number: {raw}")),
        Err(_) => Ok(patdist::daa::DEFAULT_STATE_CAP),
    }
}

#[derive(Parser)]
#[command(
    name = "patdist",
    version,
    about = "Exact distributions of text character accesses for window-based \
             pattern matching algorithms on random texts"
)]
pub struct Cli {
    /// Cap on reachable automaton states during construction
    #[arg(long, global = true, value_name = "K")]
    pub state_cap: Option<usize>,
    /// Worker threads for sweep and verify (default: all cores)
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Exact cost distribution of one algorithm on random texts
    Dist(commands::DistArgs),
    /// Exact distribution of the cost difference between two algorithms
    Compare(commands::CompareArgs),
    /// Minimized-automaton size statistics over all patterns of a length
    Sweep(commands::SweepArgs),
    /// Cross-check the automaton pipeline against full text enumeration
    Verify(commands::VerifyArgs),
    /// Monte Carlo simulation of matcher costs
    Simulate(commands::SimulateArgs),
    /// Summary statistics of a stored distribution file
    Stats(commands::StatsArgs),
}

pub fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    let state_cap = resolve_state_cap(cli.state_cap)?;
    match cli.command {
        Command::Dist(args) => commands::cmd_dist(&args, state_cap),
        Command::Compare(args) => commands::cmd_compare(&args, state_cap),
        Command::Sweep(args) => commands::cmd_sweep(&args, state_cap),
        Command::Verify(args) => commands::cmd_verify(&args, state_cap),
        Command::Simulate(args) => commands::cmd_simulate(&args, state_cap),
        Command::Stats(args) => commands::cmd_stats(&args),
    }
}

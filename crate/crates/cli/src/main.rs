//! `lielac` command-line driver.
//!
//! Exit codes: 0 pass, 1 check failure, 2 config error, 3 canonicalization failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lielac::lie::GroupId;

use config::{Overrides, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Check(String),
    Canon(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) => 2,
            CliError::Canon(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Canon(m) => write!(f, "canonicalization failed: {m}"),
        }
    }
}

impl From<lielac::Error> for CliError {
    fn from(e: lielac::Error) -> Self {
        match e {
            lielac::Error::InvalidArgument(_) | lielac::Error::Io(_) => CliError::Config(e.to_string()),
            other => CliError::Canon(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lielac", version, about = "Lie-algebra canonicalization suites and experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Check tolerance, or the largest accepted canonical energy for `canon-*`.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group axioms and action homomorphism on random elements.
    CheckGroup {
        /// heat, burgers, se2 or so2.
        #[arg(long)]
        group: Option<GroupId>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Commutators of one-parameter flows against the bracket table.
    CheckBrackets {
        /// heat or burgers.
        #[arg(long)]
        group: Option<GroupId>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Heat equation pipeline on a sine initial condition.
    CanonHeat,
    /// Burgers pipeline on a mean-shifted Gaussian random field.
    CanonBurgers,
    /// Allen–Cahn pipeline with the discrete canonicalizer.
    CanonAce,
    /// Ring-mixture kNN with rotation canonicalization.
    #[command(name = "canon-2d")]
    Canon2d,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = Overrides { out: cli.common.out.clone(), seed: cli.common.seed, threads: cli.common.threads, tol: cli.common.tol };
    let cfg = RunConfig::load(cli.common.config.as_deref(), &flags)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let write = cfg.out_dir.is_some();
    match cli.command {
        Command::CheckGroup { group, samples } => commands::check_group(&cfg, group, samples, write),
        Command::CheckBrackets { group, eps } => commands::check_brackets_cmd(&cfg, group, eps, write),
        Command::CanonHeat => commands::canon_heat(&cfg),
        Command::CanonBurgers => commands::canon_burgers(&cfg),
        Command::CanonAce => commands::canon_ace(&cfg),
        Command::Canon2d => commands::canon_2d(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}

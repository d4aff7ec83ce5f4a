//! Command-line surface for the Hartree-Fock gas phase-diagram library:
//! subcommand per study, flat key=value configuration, CSV/report emission.

pub mod commands;
pub mod config;
pub mod output;

use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hfgas",
    version,
    about = "Spin phase diagram of the translation-invariant Hartree-Fock fermion gas"
)]
pub struct Cli {
    /// flat key=value configuration file
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// output directory (created if missing)
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// worker threads for sweeps
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// random seed for the verification suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// restrict verification to the sub-second subset
    #[arg(long, global = true)]
    pub quick: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the exact model constants and transition densities
    Constants {
        /// emit machine-readable key=value lines
        #[arg(long)]
        machine: bool,
    },
    /// Zero-temperature polarization curves and argmin-vs-density scan
    T0,
    /// Positive-temperature (rho, T) sweep with transition curves and T_c
    PhaseDiagram,
    /// Fermi level vs density curves per temperature
    MuCurve,
    /// Run the property verification suites
    Verify,
}

/// Dispatch; returns the process exit code (0 ok, 1 numerical, 2 usage).
pub fn run(cli: Cli) -> i32 {
    let cfg = match config::RunConfig::load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return EXIT_USAGE;
        }
    };
    if let Some(n) = cfg.workers {
        // ignore failure: the global pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let r = match &cli.command {
        Command::Constants { machine } => commands::constants::run(&cfg, *machine),
        Command::T0 => commands::t0::run(&cfg),
        Command::PhaseDiagram => commands::phase_diagram::run(&cfg),
        Command::MuCurve => commands::mu_curve::run(&cfg),
        Command::Verify => commands::verify::run(&cfg),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_NUMERICAL
        }
    }
}

//! Thin command-line wrapper over `moran::cli`.
//!
//! Errors go to stderr as `error[<reason-code>]: <message>`; exit code 2 means
//! invalid input, 3 a resource cap (horizon, enumeration size, tolerance).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use moran::geometry::DEFAULT_ENUMERATION_CAP;
use moran::{cli, specfile, Precision};

#[derive(Parser)]
#[command(name = "moran", version, about = "Moran sets: construction, Fourier transforms and certificates")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Level-n left endpoints as exact fractions.
    Construct {
        spec: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Fourier transform on a uniform frequency grid.
    Spectrum {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        xi_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Fourier transform at the scales N_1..N_n.
    Scales {
        spec: PathBuf,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = Precision::DEFAULT_DIGITS)]
        precision: u32,
    },
    /// Obstruction, non-decay, dimension and progression report.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = Precision::DEFAULT_DIGITS)]
        precision: u32,
    },
    /// Build a system with Hausdorff dimension s; writes the spec file and prints a report.
    Generate {
        #[arg(long)]
        s: String,
        #[arg(long)]
        n_rule: String,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = Precision::DEFAULT_DIGITS)]
        precision: u32,
    },
    /// Per-level s1, s2 and growth ratios over a window.
    Dimension {
        spec: PathBuf,
        #[arg(long)]
        start: usize,
        #[arg(long)]
        end: usize,
        #[arg(long, default_value_t = Precision::DEFAULT_DIGITS)]
        precision: u32,
    },
    /// Arithmetic progressions.
    Ap {
        spec: PathBuf,
        #[command(subcommand)]
        mode: ApMode,
    },
}

#[derive(Subcommand)]
enum ApMode {
    /// Canonical progression length per level.
    Profile {
        #[arg(long)]
        up_to: usize,
    },
    /// The canonical progression at one level.
    Canonical {
        #[arg(long)]
        level: usize,
    },
    /// Exhaustive search among level endpoints.
    Search {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        min_length: u64,
        #[arg(long, default_value_t = 1000)]
        max_results: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
}

fn run(command: Command) -> moran::Result<String> {
    match command {
        Command::Construct { spec, level, cap } => cli::construct(&specfile::load(&spec)?, level, cap),
        Command::Spectrum { spec, xi_min, xi_max, steps, tol } => {
            cli::spectrum(&specfile::load(&spec)?, xi_min, xi_max, steps, tol)
        }
        Command::Scales { spec, n_max, tol, precision } => {
            cli::scales(&specfile::load(&spec)?, n_max, tol, Precision::new(precision)?)
        }
        Command::Verify { spec, precision } => cli::verify(&specfile::load(&spec)?, Precision::new(precision)?),
        Command::Generate { s, n_rule, horizon, out, precision } => {
            let (text, report) = cli::generate(&s, &n_rule, horizon, Precision::new(precision)?)?;
            std::fs::write(&out, text).map_err(|e| {
                moran::Error::InvalidParameter(format!("cannot write {}: {e}", out.display()))
            })?;
            Ok(report)
        }
        Command::Dimension { spec, start, end, precision } => {
            cli::dimension(&specfile::load(&spec)?, start, end, Precision::new(precision)?)
        }
        Command::Ap { spec, mode } => {
            let sys = specfile::load(&spec)?;
            match mode {
                ApMode::Profile { up_to } => cli::ap_profile(&sys, up_to),
                ApMode::Canonical { level } => cli::ap_canonical(&sys, level),
                ApMode::Search { level, min_length, max_results, cap } => {
                    cli::ap_search(&sys, level, min_length, max_results, cap)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse().command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.reason_code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

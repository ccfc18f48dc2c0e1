//! Command-line front end: point evaluation, table generation over z
//! ranges, and identity-suite verification with machine-readable output.
//!
//! Exit codes: 0 success; 1 usage or configuration error; 2 domain/pole
//! error; 3 non-convergence; 4 identity verification failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qmbf::qcore::QError;

mod output;
mod runner;

#[derive(Parser)]
#[command(
    name = "qmbf",
    about = "q-deformed modified Bessel and Macdonald functions: evaluation, tables, identity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point; prints re,im,terms,converged.
    Eval {
        /// One of: eq Eq qgamma qpsi phi_nu J1 J2 I1 I2 K1 K2
        func: String,
        #[arg(long)]
        q: f64,
        /// Order nu (required by phi_nu, J*, I*, K*)
        #[arg(long)]
        nu: Option<f64>,
        /// Argument as re[,im]
        #[arg(long)]
        z: String,
        /// Representation for I*/K*: series, laurent or auto
        #[arg(long, default_value = "auto")]
        rep: String,
        /// Significant digits in numeric output (1..=17)
        #[arg(long, default_value_t = 15)]
        precision: usize,
    },
    /// Tabulate a function over a z range; CSV or JSON-lines stream.
    Table {
        func: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        nu: Option<f64>,
        /// start:stop:count on the real axis, or ring:radius:count
        #[arg(long = "z-range")]
        z_range: String,
        #[arg(long, default_value = "auto")]
        rep: String,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, default_value_t = 15)]
        precision: usize,
        /// Emit NaN markers for per-point errors instead of aborting
        #[arg(long)]
        skip_errors: bool,
    },
    /// Run registered identities ("all" or explicit ids) over a grid.
    Verify {
        /// Identity ids, or "all"
        #[arg(default_value = "all")]
        suite: Vec<String>,
        /// Flat key=value grid file (q_values, nu_values, z_fractions,
        /// scaling_mode, tol_scale)
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, default_value_t = 15)]
        precision: usize,
    },
}

fn main() -> ExitCode {
    match runner::run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn exit_for(e: &QError) -> u8 {
    match e {
        QError::InvalidParameter(_) | QError::UnknownIdentity(_) => 1,
        QError::Pole { .. } | QError::Domain(_) | QError::IntegerOrder { .. } => 2,
        QError::NonConvergence { .. } => 3,
    }
}

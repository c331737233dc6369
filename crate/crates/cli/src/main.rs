//! `varobs`: command-line front end for the obstruction library.
//!
//! Every subcommand reads complexes and cochains in the JSON interchange format
//! and prints a structured report. Exit status is 0 on success, 1 on invalid
//! input and 2 when an internal consistency check fails.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use varobs::{Ring, Tolerance};

#[derive(Debug, Parser)]
#[command(name = "varobs", version, about = "Cohomological obstructions on simplicial 3-manifolds")]
pub struct Cli {
    /// Relative tolerance for every vanishing and exactness test.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a fixture complex (s3, t3, s1xs2, rp3, sphere2, circle(n)).
    Generate { name: String },
    /// Betti numbers and torsion of the cohomology groups.
    Homology {
        complex: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value = "int")]
        ring: Ring,
    },
    /// Emit an integer cohomology generator as a cochain document.
    Basis {
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Global primitive of a closed cochain, or its class coordinates.
    Primitive { complex: PathBuf, cochain: PathBuf },
    /// Poincaré pairing matrix between degrees k and n - k.
    Pairing {
        complex: PathBuf,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Real and integral Chern class of an integer 2-cocycle.
    Chern { complex: PathBuf, cocycle: PathBuf },
    /// Least-squares solution of the flatness equation.
    Flatten { complex: PathBuf, cocycle: PathBuf },
    /// Finite-difference check of the Chern–Simons gradient.
    CsGradCheck { complex: PathBuf },
    /// Obstruction pairings of a bundle against closed 1-forms.
    Obstruction {
        complex: PathBuf,
        cocycle: PathBuf,
        #[arg(long)]
        gamma: Option<PathBuf>,
    },
    /// Flatness versus obstruction-pairing verdict with a witness.
    Sharpness { complex: PathBuf, cocycle: PathBuf },
    /// Čech connecting map on the star cover, compared with simplicial cohomology.
    CechDelta { complex: PathBuf, cochain: PathBuf },
    /// Globality of a closed cochain: Čech verdict and global primitive.
    Current { complex: PathBuf, cochain: PathBuf },
}

/// A diagnostic with a stable code.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub internal: bool,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> CliError {
        CliError { code, message: message.into(), internal: false }
    }
}

impl From<varobs::Error> for CliError {
    fn from(e: varobs::Error) -> CliError {
        CliError { code: e.code(), message: e.to_string(), internal: e.is_internal() }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    return ExitCode::SUCCESS;
                }
                ErrorKind::InvalidSubcommand => {
                    let name = argv.iter().skip(1).find(|a| !a.starts_with('-')).cloned().unwrap_or_default();
                    eprintln!("error[UNKNOWN_COMMAND]: unknown subcommand {name:?}");
                }
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
                    eprintln!("error[BAD_FLAG]: {line}");
                }
            }
            return ExitCode::from(1);
        }
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        eprintln!("error[BAD_FLAG]: --tol must be a positive finite number, got {}", cli.tol);
        return ExitCode::from(1);
    }
    let tol = Tolerance::new(cli.tol);
    let args: Vec<String> = argv.into_iter().skip(1).collect();
    match commands::run(&cli.command, &args, tol) {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error[FILE_NOT_FOUND]: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.message);
            ExitCode::from(if e.internal { 2 } else { 1 })
        }
    }
}

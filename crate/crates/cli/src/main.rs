#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{a_sum, coeffs, lineshape, sidebands, verify};

#[derive(Parser, Debug)]
#[command(name = "besselrules", version, about = "Bessel-product sum rules: tables, checks, sidebands, lineshapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact coefficient polynomials D_{k,n}(y), checked along two independent paths
    Coeffs(coeffs::Args),
    /// Run a grid of identity checks and report residuals
    Verify(verify::Args),
    /// Sideband amplitudes G_n of a periodic phase modulation
    Sidebands(sidebands::Args),
    /// Harmonics of the absorbed power over a detuning sweep
    Lineshape(lineshape::Args),
    /// The sum A_s = sum_n J_n J_{n-s} / (gamma + i n Omega) by several methods
    ASum(a_sum::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coeffs(a) => coeffs::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Sidebands(a) => sidebands::run(&a),
        Command::Lineshape(a) => lineshape::run(&a),
        Command::ASum(a) => a_sum::run(&a),
    };
    match result {
        Ok(()) => ExitCode::from(error::EXIT_OK as u8),
        Err(e) => {
            eprintln!("besselrules: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

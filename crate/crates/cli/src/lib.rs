//! `kerrgen`: command-line front end for designing and analysing the Kerr-based
//! generation of entangled coherent-state superpositions.
//!
//! Every subcommand produces a self-describing table (parameter echo, derived
//! results, rows) written as CSV with `#` comment lines or as JSON. Identical
//! arguments give byte-identical output.

pub mod args;
pub mod commands;
mod error;
pub mod output;
pub mod target;

pub use args::{Cli, Command};
pub use error::{CliError, Result};

/// Executes one parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Design(a) => commands::design::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::EntangleScan(a) => commands::scan::run(a),
        Command::Feasibility(a) => commands::feasibility::run(a),
    }
}

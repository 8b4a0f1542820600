//! `dmgi`: generate planted-partition networks, train embeddings, evaluate.
//!
//! Exit status is 0 on success, 2 for usage, input-format or contract
//! errors, and 3 when training diverges.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

const EXIT_USAGE: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Train(a) => commands::train(a),
        Command::Evaluate(a) => commands::evaluate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<dmgi_core::Error>() {
                Some(dmgi_core::Error::Divergence { .. } | dmgi_core::Error::NumericDomain { .. }) => EXIT_DIVERGED,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}

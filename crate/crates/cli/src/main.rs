mod common;
mod forest;
mod quantify;
mod rank;
mod simulate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Chance-adjusted dependency measures, bias experiments and adjusted-split forests.
#[derive(Debug, Parser)]
#[command(name = "depadj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one pair of columns.
    Quantify(quantify::QuantifyArgs),
    /// Rank every real column by its dependency with a target.
    Rank(rank::RankArgs),
    /// Run a simulation and write plot-ready CSV.
    #[command(subcommand)]
    Simulate(simulate::SimulateCommand),
    /// Train, evaluate or tune a random forest.
    #[command(subcommand)]
    Forest(forest::ForestCommand),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Quantify(args) => quantify::run(&args),
        Command::Rank(args) => rank::run(&args),
        Command::Simulate(cmd) => simulate::run(&cmd),
        Command::Forest(cmd) => forest::run(&cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, tag) = common::exit_code(&err);
            eprintln!("error[{tag}]: {err:#}");
            ExitCode::from(code)
        }
    }
}

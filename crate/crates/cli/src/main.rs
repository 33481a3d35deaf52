//! `rdo`: surrogate fitting, uncertainty propagation and robust design from
//! the command line. Every subcommand writes its artifacts to `--out`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_pair, Overrides, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "rdo", version, about = "Robust design optimization on GPR + chaos surrogates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic samples.csv
    Generate,
    /// Fit both GPR models from the samples
    Fit,
    /// Evaluate mean and confidence band of both objectives on a grid
    Propagate,
    /// Solve one robust problem
    Solve,
    /// Weighted problem over a range of ω; writes the non-dominated front
    Pareto,
    /// Worst-case problem over a list of upper bounds
    BoundSweep,
    /// Closed-form and Monte Carlo checks of the propagation
    Validate,
}

#[derive(Args)]
struct Flags {
    /// TOML run configuration; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    omega: Option<f64>,
    #[arg(long, global = true)]
    order: Option<u32>,
    /// 95% half-width of the input scatter
    #[arg(long, global = true)]
    ex: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// evaluation grid, e.g. 100x100
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=3))]
    problem: Option<u8>,
    /// upper bound for problems 2 and 3
    #[arg(long, global = true)]
    bound: Option<f64>,
    /// σ bounds for problem 1, as `s1,s2`
    #[arg(long, global = true, value_parser = parse_pair)]
    sigma_bounds: Option<[f64; 2]>,
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let f = cli.flags;
    let mut cfg = match &f.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply(Overrides {
        out: f.out,
        seed: f.seed,
        omega: f.omega,
        order: f.order,
        ex: f.ex,
        alpha: f.alpha,
        grid: f.grid,
        problem: f.problem,
        bound: f.bound,
        sigma_bounds: f.sigma_bounds,
    });
    match cli.command {
        Command::Generate => commands::generate(&cfg),
        Command::Fit => commands::fit(&cfg),
        Command::Propagate => commands::propagate(&cfg),
        Command::Solve => commands::solve(&cfg),
        Command::Pareto => commands::pareto(&cfg),
        Command::BoundSweep => commands::sweep_bounds(&cfg),
        Command::Validate => commands::validate(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rdo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

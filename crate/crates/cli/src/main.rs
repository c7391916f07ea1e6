use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod dataset;
mod eval;
mod fit;
mod polytope;
mod report;
mod solve;

/// Max-plus algebra, tropical geometry and piecewise-linear regression.
#[derive(Debug, Parser)]
#[command(name = "tropfit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a max-affine model to a CSV dataset.
    Fit(FitArgs),
    /// Solve a max-⊛ system `A ⊞ x = b` given as two tropmat files.
    Solve(SolveArgs),
    /// Evaluate a troppoly model at the rows of a CSV file.
    Eval(EvalArgs),
    /// Newton polytopes of troppoly files, with their join and Minkowski sum.
    Polytope(PolytopeArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Dataset CSV: feature columns then the target.
    pub data: PathBuf,
    #[arg(long, default_value = "max-plus")]
    pub clodum: String,
    /// gle or mmae.
    #[arg(long, default_value = "gle")]
    pub method: String,
    /// `auto:K`, or a file with one slope vector per line. Omitted: a
    /// tropical line (n = 1) or plane (n = 2).
    #[arg(long)]
    pub slopes: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target column name or 1-based index; defaults to the last column.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    /// Directory for report.txt, model.troppoly, curve.dat, residuals.dat.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Model grid points per axis in curve.dat.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// `<min>:<max>`: fit every K in the range with automatic slopes.
    #[arg(long)]
    pub sweep_k: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub matrix: PathBuf,
    pub rhs: PathBuf,
    /// gle or mmae; mmae needs max-plus.
    #[arg(long, default_value = "gle")]
    pub method: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub model: PathBuf,
    /// n coordinate columns, optionally followed by (or holding at
    /// `--target`) a target column.
    pub data: PathBuf,
    /// Slack for the variety test.
    #[arg(long, default_value_t = tropfit::tropgeom::DEFAULT_VARIETY_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Args)]
pub struct PolytopeArgs {
    #[arg(required = true)]
    pub polys: Vec<PathBuf>,
}

/// A request that contradicts an operation's preconditions.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<tropfit::Error>() {
        Some(tropfit::Error::DimensionMismatch { .. } | tropfit::Error::Unsupported { .. } | tropfit::Error::ClodumMismatch { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Fit(a) => fit::run(&a),
        Command::Solve(a) => solve::run(&a),
        Command::Eval(a) => eval::run(&a),
        Command::Polytope(a) => polytope::run(&a),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("tropfit: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

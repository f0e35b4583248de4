//! Command-line driver: network generation, ordering, tree optimization,
//! evaluation, verification and batch benchmarking.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod commands;
pub mod files;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use contrakt::Objective;

/// Raised when a tree or amplitude check does not hold.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

/// Process exit code for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<VerificationFailed>() {
            return EXIT_VERIFICATION;
        }
        if let Some(contrakt::Error::Infeasible(_)) = cause.downcast_ref::<contrakt::Error>() {
            return EXIT_INFEASIBLE;
        }
    }
    EXIT_INPUT
}

#[derive(Debug, Parser)]
#[command(
    name = "contrakt",
    version,
    about = "Contraction trees for tensor networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a QAOA MaxCut amplitude network.
    Generate(GenerateArgs),
    /// Compute a linear ordering of a network's tensors or a graph's vertices.
    Order(OrderArgs),
    /// Search for a good contraction tree within a time budget.
    Optimize(OptimizeArgs),
    /// Print the cost report of a stored tree.
    Eval(EvalArgs),
    /// Re-check a stored tree and, when values are present, its amplitude.
    Verify(EvalArgs),
    /// Run a matrix of generated instances and append results to a CSV.
    Bench(BenchArgs),
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse().map_err(|e: contrakt::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub layers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated, one per layer.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gammas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub betas: Option<Vec<f64>>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    pub net: Option<PathBuf>,
    /// Edge-list graph file instead of a network.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exponent of the p-sum objective.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long, value_parser = parse_objective, default_value = "vertex")]
    pub objective: Objective,
    #[arg(long, default_value_t = 5.0)]
    pub budget_s: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_tree: Option<PathBuf>,
    #[arg(long)]
    pub out_order: Option<PathBuf>,
    /// Append one result row, writing the header if the file is new.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Stop after this many attempts even if budget remains.
    #[arg(long)]
    pub attempts: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Debug: solve every ordering of a small network instead of sampling.
    #[arg(long)]
    pub exhaustive_orders: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long)]
    pub tree: PathBuf,
    /// Defaults to the objective stored with the tree, else vertex.
    #[arg(long, value_parser = parse_objective)]
    pub objective: Option<Objective>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// TOML file describing the instance matrix.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 5.0)]
    pub budget_s: f64,
    #[arg(long)]
    pub csv: PathBuf,
    /// Random-order baseline rows; defaults to `<csv stem>_baseline.csv`.
    #[arg(long)]
    pub baseline_csv: Option<PathBuf>,
}

/// Run one parsed command, printing its result to stdout.
pub fn run(cli: Cli) -> anyhow::Result<()> {
    let out = match cli.command {
        Command::Generate(a) => commands::generate(&a)?,
        Command::Order(a) => commands::order(&a)?,
        Command::Optimize(a) => commands::optimize(&a)?.to_json(),
        Command::Eval(a) => commands::eval(&a)?,
        Command::Verify(a) => commands::verify(&a)?,
        Command::Bench(a) => bench::run(&a)?,
    };
    if !out.is_null() {
        println!("{}", serde_json::to_string_pretty(&out)?);
    }
    Ok(())
}

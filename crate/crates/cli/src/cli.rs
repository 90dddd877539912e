use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "causal-surgery",
    version,
    about = "Interventional distributions from observational ones"
)]
pub struct Cli {
    /// Decimal places for emitted probabilities.
    #[arg(long, global = true, default_value_t = 6)]
    pub precision: usize,

    /// Tolerance for stochasticity checks on inputs and for randcheck.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the graph, tables and joint of a model file.
    Validate { file: PathBuf },

    /// Observed joint of a model given by tables.
    Interpret { file: PathBuf },

    /// Marginal of the joint on some variables.
    Marginal {
        file: PathBuf,
        /// Comma-separated variables to keep, in output order.
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
    },

    /// Split a marginal into a prior and a channel.
    Disintegrate {
        file: PathBuf,
        /// Conditioning and conditioned variables, e.g. `S|C` or `A,B|C`.
        #[arg(long)]
        split: String,
    },

    /// Factor a three-part marginal into a 2-comb and a channel.
    Comb {
        file: PathBuf,
        /// Three comma-separated groups; an empty string is an empty group.
        #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_hyphen_values = true)]
        grouping: Vec<String>,
    },

    /// Identify a single-node intervention without evaluating it.
    Factorize {
        file: PathBuf,
        #[arg(long = "do", value_name = "X")]
        target: String,
    },

    /// Interventional joint after randomising one node.
    Intervene {
        file: PathBuf,
        #[arg(long = "do", value_name = "X")]
        target: String,
        #[arg(long, value_enum, default_value_t = Mode::Observational)]
        mode: Mode,
    },

    /// Seeded comparison of the observational pipeline against the oracle.
    Randcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Largest number of observed nodes per model.
        #[arg(long, default_value_t = 5)]
        max_nodes: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// From the observed joint alone.
    Observational,
    /// By cutting the model's own tables.
    Oracle,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isingtsp::ising::Decrement;

#[derive(Debug, Parser)]
#[command(
    name = "isingtsp",
    version,
    about = "Hierarchical TSP solver on simulated crossbar Ising macros"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print a report.
    Solve(SolveArgs),
    /// Sweep cluster size, bit width and seed over a list of instances.
    Bench(BenchArgs),
    /// Print the exact optimal tour length of a small instance.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecrementArg {
    PerSweep,
    PerUpdate,
}

impl From<DecrementArg> for Decrement {
    fn from(d: DecrementArg) -> Self {
        match d {
            DecrementArg::PerSweep => Decrement::PerSweep,
            DecrementArg::PerUpdate => Decrement::PerOrderUpdate,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolveArgs {
    /// Key = value settings file; flags given here take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// TSPLIB instance (EUC_2D, CEIL_2D or ATT).
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,
    /// Largest cluster per macro [default: 12].
    #[arg(long, value_name = "INT")]
    pub max_cluster_size: Option<usize>,
    /// Weight precision [default: 4].
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4))]
    pub bits: Option<u32>,
    #[arg(long, value_name = "INT")]
    pub seed: Option<u64>,
    /// Host worker threads [default: host parallelism].
    #[arg(long, value_name = "INT")]
    pub macros: Option<usize>,
    /// Macros on the modeled chip, 0 for one per cluster [default: 0].
    #[arg(long, value_name = "INT")]
    pub chip_macros: Option<usize>,
    /// HRS leakage as a fraction of full scale [default: 0].
    #[arg(long, value_name = "REAL")]
    pub nonideal_eps: Option<f64>,
    /// JSON object mapping instance names to optimal tour lengths.
    #[arg(long, value_name = "PATH")]
    pub optima: Option<PathBuf>,
    /// Write one CSV row per macro sweep here.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Report format [default: json].
    #[arg(long, value_enum)]
    pub report: Option<ReportFormat>,
    /// Leave wall-clock times out of the report.
    #[arg(long)]
    pub deterministic: bool,
    /// When the write current steps down [default: per-sweep].
    #[arg(long, value_enum)]
    pub decrement: Option<DecrementArg>,
    /// Write the tour in TSPLIB format here.
    #[arg(long, value_name = "PATH")]
    pub tour: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BenchArgs {
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// File listing one instance path per line, relative to the file.
    #[arg(long, value_name = "PATH")]
    pub instances: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub optima: Option<PathBuf>,
    /// Cluster sizes [default: 8,12].
    #[arg(long = "m", value_name = "INT,...", value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
    /// Bit widths [default: 2,3,4].
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(2..=4))]
    pub bits: Option<Vec<u32>>,
    /// Seeds [default: 0,1].
    #[arg(long, value_name = "INT,...", value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, value_name = "INT")]
    pub macros: Option<usize>,
    #[arg(long, value_name = "INT")]
    pub chip_macros: Option<usize>,
    #[arg(long, value_name = "REAL")]
    pub nonideal_eps: Option<f64>,
    #[arg(long, value_enum)]
    pub decrement: Option<DecrementArg>,
    /// Leave wall-clock columns empty.
    #[arg(long)]
    pub deterministic: bool,
    /// Write the per-run CSV here instead of stdout.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Also write seed-averaged rows here.
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMethod {
    HeldKarp,
    Exhaustive,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, value_name = "PATH")]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleMethod::HeldKarp)]
    pub method: OracleMethod,
}

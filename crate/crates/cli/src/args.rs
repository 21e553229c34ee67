use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "quasiortho",
    version,
    about = "Quasi-orthogonal packing, Haar overlap statistics and decoherence experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// RNG seed. Unseeded runs draw one from system entropy and record it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of trials (each command has its own default).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Leave the timestamp out of the header so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample squared overlaps with a fixed state and compare with Beta(1, d-1).
    OverlapDist(OverlapDistArgs),
    /// Tabulate the exact two-sided tail against the Levy bound.
    LevyCheck(LevyCheckArgs),
    /// Packing bounds and random constructions.
    Packing {
        #[command(subcommand)]
        mode: PackingMode,
    },
    /// Run the pointer-measurement decoherence experiment.
    Decohere(DecohereArgs),
    /// Microcanonical effective dimension of a spectrum.
    Deff(DeffArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OverlapDistArgs {
    #[arg(long)]
    pub d: usize,
    /// Histogram bins over [0, max sample].
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Also write the raw sample here.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LevyCheckArgs {
    /// Dimensions (default grid 2 16 128 1024 4096).
    #[arg(long, num_args = 1..)]
    pub d: Vec<usize>,
    /// Deviations (default grid 0.01 0.05 0.1 0.5 1.0).
    #[arg(long, num_args = 1..)]
    pub delta: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum PackingMode {
    /// Evaluate the random-coding lower bound.
    #[command(group(ArgGroup::new("space").required(true).args(["d", "qubits"])))]
    Bound {
        #[arg(long)]
        d: Option<u64>,
        /// Use d = 2^qubits and report the natural log of the bound.
        #[arg(long)]
        qubits: Option<u32>,
        #[arg(long)]
        eps: f64,
    },
    /// Sample and certify families; with --trials, measure the success rate.
    Build(PackingBuildArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PackingBuildArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub eps: f64,
    /// Family size.
    #[arg(long = "M", visible_alias = "m")]
    pub m: usize,
    /// Rejection sampling instead of one-shot sampling.
    #[arg(long, conflicts_with = "trials")]
    pub greedy: bool,
    /// Draw limit for --greedy (default 100 M).
    #[arg(long, requires = "greedy")]
    pub max_attempts: Option<usize>,
    /// Export the family (one row per vector, interleaved re/im columns).
    #[arg(long)]
    pub family: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DynamicsKind {
    ExactHaar,
    Chaotic,
    Integrable,
}

#[derive(Debug, Clone, Args)]
pub struct DecohereArgs {
    /// Environment qubits.
    #[arg(long, required_unless_present = "config")]
    pub n: Option<u32>,
    /// Pointer values (default 2, or the number of --theta / --coefficients).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub dynamics: Option<DynamicsKind>,
    /// Brickwork depth for chaotic dynamics (default 4n).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Rotation angle per pointer value for integrable dynamics.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub theta: Vec<f64>,
    /// Real pointer amplitudes; normalized before use (default equal weights).
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub coefficients: Vec<f64>,
    /// Build dense Haar unitaries for exact-haar dynamics.
    #[arg(long)]
    pub dense_unitaries: bool,
    /// TOML model file; replaces the model flags.
    #[arg(long, conflicts_with_all = ["n", "k", "dynamics", "depth", "theta", "coefficients", "dense_unitaries"])]
    pub config: Option<PathBuf>,
    /// Exit 1 when the run is flagged atypical.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["spectrum", "popcount"])))]
pub struct DeffArgs {
    /// One energy per line, or a JSON array; must be sorted ascending.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Use the spectrum of n free qubits (energy = number of ones).
    #[arg(long)]
    pub popcount: Option<u32>,
    /// Window start E; the window is [E, E + width).
    #[arg(long, allow_negative_numbers = true)]
    pub energy: f64,
    #[arg(long)]
    pub width: f64,
}

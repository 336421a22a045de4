use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 1729;

/// Generalized quantum Fourier transforms, rotation cascades, the quantum
/// Haar transform and a dihedral hidden subgroup harness.
///
/// Basis index k encodes qubits (x_0, .., x_{n-1}) as k = sum_i x_i 2^i.
/// Dense matrices are row-major with m[y][x] = <y|U|x>.
///
/// Exit codes: 0 success, 1 invalid input, 2 validity or comparison failure,
/// 3 size cap exceeded.
#[derive(Debug, Parser, Serialize)]
#[command(name = "gqt", version)]
pub struct Cli {
    /// Output format. CSV prints 12 significant digits and is not meant to round-trip.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Root seed for every random choice.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,

    /// Tolerance for numeric verdicts (unitarity, circuit comparison).
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,

    /// Largest n for which 2^n x 2^n matrices are built.
    #[arg(long, env = "GQT_DENSE_CAP", default_value_t = 12, global = true)]
    pub dense_cap: usize,

    /// Largest n for statevector-only work.
    #[arg(long, default_value_t = 20, global = true)]
    pub state_cap: usize,

    /// Largest n for the exhaustive subset criterion.
    #[arg(long, default_value_t = 20, global = true)]
    pub general_cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Build a dense matrix and dump its entries.
    Matrix(MatrixArgs),
    /// Check a phase matrix against the validity criteria and numerically.
    CheckUnitary(CheckArgs),
    /// Apply a circuit to a basis state.
    Simulate(SimulateArgs),
    /// Compare a gate cascade with its dense formula.
    Compare(CompareArgs),
    /// Run the dihedral hidden subgroup experiment.
    Dhsp(DhspArgs),
    /// Build the Haar transform, verify its closed forms, optionally dump P.
    Haar(HaarArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Gqft,
    Rot1,
    Rot2,
    Haar,
    Dft,
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixArgs {
    #[arg(long, value_enum)]
    pub kind: MatrixKind,
    /// Phase matrix JSON (gqft) or rotation spec JSON (rot1, rot2).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Qubit count (haar, dft).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Diagonal 2^(n-1), upper entries multiples of N.
    Triangular,
    /// Every nonempty row subset has a column summing to 2^(n-1) mod N.
    Subset,
    /// Every nonzero {-1, 0, 1} row combination does; exact for unitarity.
    Signed,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    /// Phase matrix JSON: {"n": int, "phi": [[real, ..], ..]}.
    #[arg(long)]
    pub spec: PathBuf,
    /// Criterion that decides the exit code.
    #[arg(long, value_enum, default_value_t = Criterion::Subset)]
    pub criterion: Criterion,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Circuit JSON: {"n": int, "gates": [..]}.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Input basis index.
    #[arg(long, default_value_t = 0)]
    pub basis: usize,
    /// Also sample this many full-register measurements.
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareKind {
    /// Triangular phase matrix spec.
    Gqft,
    /// Rotation spec, either variant.
    Rot,
    /// Textbook QFT cascade with bit-reversal swaps against the DFT.
    Qft,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub kind: CompareKind,
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Qubit count (qft).
    #[arg(long)]
    pub n: Option<usize>,
    /// Also write the circuit as circuit JSON.
    #[arg(long)]
    pub dump_circuit: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DhspArgs {
    #[arg(long)]
    pub n: usize,
    /// Hidden value in [0, 2^n).
    #[arg(long)]
    pub d: u64,
    /// perfect, random or mixed:k (first k rows perfect).
    #[arg(long, default_value = "perfect")]
    pub samples: String,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Also report mean success over mixed:k for k = 0..=n.
    #[arg(long)]
    pub sweep: bool,
    /// Sample sets drawn per k in the sweep.
    #[arg(long, default_value_t = 20)]
    pub sweep_draws: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct HaarArgs {
    #[arg(long)]
    pub n: usize,
    /// Write the dense P matrix here as matrix JSON.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "bmv", version, about = "Trace-polynomial coefficients, identity checks and sign searches")]
pub struct Cli {
    /// Embed wall-clock duration in the manifest (breaks byte-identical replays).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Coefficients of λ ↦ Tr(A+λB)^p.
    Coeffs(CoeffsArgs),
    /// Check the inverse-power derivative identity.
    VerifyLemma1(Lemma1Args),
    /// Sign pattern of derivatives of λ ↦ Tr f(A+λB).
    ProbeCm(ProbeArgs),
    /// Minimize a coefficient or a single trace monomial.
    Search(SearchArgs),
    /// Run the regression suites.
    OracleDiff(OracleArgs),
    /// Write a random matrix file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Dp,
    Brute,
    Necklace,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub p: usize,
    /// Highest coefficient index (default p).
    #[arg(long)]
    pub r_max: Option<usize>,
    #[arg(long, value_enum, default_value = "dp")]
    pub engine: Engine,
    /// Also compute exact rational coefficients.
    #[arg(long)]
    pub exact: bool,
    /// Include per-necklace monomials.
    #[arg(long)]
    pub terms: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct Lemma1Args {
    #[arg(long, requires_all = ["b", "p", "r"], conflicts_with = "random")]
    pub a: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of random instances.
    #[arg(long, requires_all = ["dim", "seed", "pmax", "rmax"])]
    pub random: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub pmax: Option<usize>,
    #[arg(long)]
    pub rmax: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    Exp,
    Invpow,
    Mixture,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[arg(long, value_enum)]
    pub mode: ProbeMode,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Exponent for invpow; non-integers go through a 64-node exponential mixture.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4)]
    pub rmax: usize,
    #[arg(long, default_value = "0:5:0.25")]
    pub grid: String,
    /// JSON file {"terms": [{"weight": w, "decay": t}, ...]} for mode mixture.
    #[arg(long)]
    pub mixture: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveArg {
    Coeff,
    Term,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationArg {
    TraceOne,
    OperatorNormOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldArg {
    Complex,
    Real,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    /// Word over {A,B} for the term objective.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Re-evaluate the best instance exactly.
    #[arg(long)]
    pub certify: bool,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, value_enum)]
    pub normalization: Option<NormalizationArg>,
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Restrict to commuting (diagonal) pairs.
    #[arg(long)]
    pub diagonal: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for the instance matrix files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteArg {
    Quick,
    Full,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Psd,
    Pd,
    Hermitian,
    IntegerGram,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Diagonal shift for kind pd.
    #[arg(long, default_value_t = 0.5)]
    pub shift: f64,
    /// Write the exact rational form (integer-gram only).
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: PathBuf,
}

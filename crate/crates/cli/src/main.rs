mod commands;
mod manifest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

use dirac_carousel::Error;

#[derive(Parser, Debug, serde::Serialize)]
#[command(name = "carousel", version, about = "Random Dirac operators and their point processes")]
pub struct Cli {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct Common {
    /// Base seed; path i uses a stream derived from (seed, i).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of grid cells for path-driven models.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Grid cutoff near the singular endpoint (start time for ks).
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, serde::Serialize)]
pub enum Command {
    /// Sample spectra of a limit model.
    Sample(SampleArgs),
    /// Finite circular or Hua-Pickrell ensemble through its Dirac operator.
    Finite(FiniteArgs),
    /// Run the acceptance criteria.
    Validate(ValidateArgs),
    /// Independent oracles.
    Oracle(OracleArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Sine,
    Bessel,
    Hp,
    Schrodinger,
    Airy,
    Ks,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct SampleArgs {
    #[arg(value_enum)]
    pub model: Model,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Hard-edge parameter.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    /// Hua-Pickrell parameter as `a+bi`.
    #[arg(long, default_value = "0", value_parser = parse_complex)]
    #[serde(serialize_with = "manifest::complex")]
    pub delta: Complex64,
    /// Schrödinger horizon.
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, default_values_t = [-20.0, 20.0])]
    pub window: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    /// Bessel: report the k smallest positive points instead of a window.
    #[arg(long)]
    pub k: Option<usize>,
    /// Airy: also store the noise record of path 0 here.
    #[arg(long)]
    pub noise_out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiniteKind {
    Circular,
    HuaPickrell,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct FiniteArgs {
    #[arg(value_enum)]
    pub kind: FiniteKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value = "0", value_parser = parse_complex)]
    #[serde(serialize_with = "manifest::complex")]
    pub delta: Complex64,
    /// Number of 2πn periods of the spectrum to report.
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
    /// Coefficient file; defaults to `<out>.coeffs.json` when `--out` is set.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Deterministic,
    Statistical,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetArg {
    Small,
    Full,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[arg(long, value_enum, default_value_t = BudgetArg::Full)]
    pub budget: BudgetArg,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    EigenAngles,
    HsNorm,
    SlHardEdge,
    Riccati,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub kind: OracleKind,
    /// Coefficient file, operator file or noise record, depending on the oracle.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Riccati: spectral parameters to count at.
    #[arg(long, num_args = 1.., allow_hyphen_values = true, default_values_t = [0.0])]
    pub lambda: Vec<f64>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim().parse::<Complex64>().map_err(|_| format!("expected a complex literal like 0.5+0.5i, got {s:?}"))
}

/// Failure modes mapped to exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(Error),
    Validation(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Io(_) => Failure::Usage(format!("{}: {e}", e.name())),
            e => Failure::Numeric(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("Io: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(2)
        }
        Err(Failure::Validation(n)) => {
            eprintln!("{n} criteria failed");
            ExitCode::from(3)
        }
    }
}

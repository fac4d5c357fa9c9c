mod commands;
mod complex;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hoggar",
    version,
    about = "Construct and certify SIC-POVMs from Hadamard matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Dimension of the family
    #[arg(long, global = true, default_value_t = 8)]
    pub d: usize,
    /// Construction parameter, e.g. -1+2i or (1+sqrt3)(1+i)/2
    #[arg(
        long,
        global = true,
        default_value = "-1+2i",
        allow_hyphen_values = true
    )]
    pub v: String,
    #[arg(long, global = true, value_enum, default_value_t = HadamardKind::Sylvester)]
    pub hadamard: HadamardKind,
    /// Matrix file for --hadamard file
    #[arg(long, global = true)]
    pub hadamard_file: Option<PathBuf>,
    /// Family file written by `construct`; overrides --d/--v/--hadamard
    #[arg(long, global = true)]
    pub family: Option<PathBuf>,
    /// Twin family: `auto` conjugates the family, otherwise a family file
    #[arg(long, global = true, default_value = "auto")]
    pub twin: String,
    /// Ensemble JSON for mutual-info
    #[arg(long, global = true)]
    pub ensemble: Option<PathBuf>,
    /// State JSON for entropy
    #[arg(long, global = true)]
    pub state: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 64)]
    pub restarts: usize,
    /// Override the check tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Show information quantities in bits (reports stay in nats)
    #[arg(long, global = true)]
    pub bits: bool,
    /// Worker threads; 0 uses every core
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Haar samples for the entropy range check
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    /// Random pairs for the Monte Carlo moment check
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub pairs: usize,
    /// Highest frame-potential order for design-check
    #[arg(long, global = true, default_value_t = 3)]
    pub t: u32,
    /// Comma-separated check names for report (default: all)
    #[arg(long, global = true, value_delimiter = ',')]
    pub checks: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HadamardKind {
    Sylvester,
    Fourier,
    File,
}

impl HadamardKind {
    pub fn name(self) -> &'static str {
        match self {
            HadamardKind::Sylvester => "sylvester",
            HadamardKind::Fourier => "fourier",
            HadamardKind::File => "file",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Build a family and write it as JSON
    Construct,
    /// Check equal overlaps and identity resolution
    VerifySic,
    /// Check three-qubit Pauli covariance (d = 8)
    Covariance,
    /// Outcome distributions and entropies of given states
    Entropy,
    /// Multi-restart search for the minimum entropy
    MinEntropy,
    /// Search for the informational power and certify it against the minimum entropy
    #[command(alias = "certify")]
    InfoPower,
    /// Mutual information of an ensemble file
    MutualInfo,
    /// Frame potentials against Haar moments
    DesignCheck,
    /// Zero-block design of twin families (d = 8)
    ZeroDesign,
    /// Bloch simplices and the transpose reflection
    Bloch,
    /// Run every registered check into one manifest
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Construct => "construct",
            Command::VerifySic => "verify-sic",
            Command::Covariance => "covariance",
            Command::Entropy => "entropy",
            Command::MinEntropy => "min-entropy",
            Command::InfoPower => "info-power",
            Command::MutualInfo => "mutual-info",
            Command::DesignCheck => "design-check",
            Command::ZeroDesign => "zero-design",
            Command::Bloch => "bloch",
            Command::Report => "report",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

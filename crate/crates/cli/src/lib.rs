//! The `spectral-twins` command line: graph analyses printed as
//! deterministic JSON reports.
//!
//! Exit codes: 0 success or true verdict, 1 false verdict, 2 input error,
//! 3 numerical failure.

pub mod commands;
pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use spectral_twins::nodal::{Convention, NodalError, DEFAULT_ZERO_TOL};
use spectral_twins::quantum::{QuantumError, DEFAULT_GRID_STEP, DEFAULT_K_MAX};
use spectral_twins::spectra::SpectraError;
use thiserror::Error;

pub use report::RunReport;

use input::{BuiltinArgs, PairSource, Source};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::DimensionMismatch { .. } | SpectraError::NotSquare { .. } => CliError::Input(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<NodalError> for CliError {
    fn from(e: NodalError) -> Self {
        match e {
            NodalError::LengthMismatch { .. } | NodalError::NonPositiveWeight => CliError::Input(e.to_string()),
            NodalError::Spectra(inner) => inner.into(),
            NodalError::ZeroEntry { index, vertex } => CliError::Numerical(format!(
                "{}vanishes at vertex {}; strong nodal domains are undefined (see --convention weak)",
                index.map(|i| format!("eigenvector {} ", i + 1)).unwrap_or_default(),
                vertex + 1
            )),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::BadRange { .. }
            | QuantumError::LengthCount { .. }
            | QuantumError::BadLength { .. }
            | QuantumError::Graph(_) => CliError::Input(e.to_string()),
            QuantumError::Spectra(inner) => inner.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spectral-twins",
    version,
    about = "Isospectral graph pairs, nodal counts and quantum graph spectra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConventionArg {
    Strong,
    Weak,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Strong => Convention::Strong,
            ConventionArg::Weak => Convention::Weak,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, eigenvectors and characteristic polynomial.
    Spectrum {
        #[command(flatten)]
        source: Source,
    },
    /// Nodal domain counts of every eigenvector.
    Nodal {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "strong")]
        convention: ConventionArg,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        zero_tol: f64,
    },
    /// Compare two spectra.
    Isospectral {
        #[command(flatten)]
        source: PairSource,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Compare two nodal count sequences.
    Isonodal {
        #[command(flatten)]
        source: PairSource,
        #[arg(long, value_enum, default_value = "strong")]
        convention: ConventionArg,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        zero_tol: f64,
    },
    /// Apply a polynomial to the Laplacian.
    Polymap {
        #[command(flatten)]
        source: Source,
        /// Coefficients `c0,c1,...` of `P(x) = c0 + c1 x + ...`.
        #[arg(long, value_name = "C0,C1,...", allow_hyphen_values = true)]
        coeffs: String,
        /// Write the induced graph file here when `P(L)` is a valid Laplacian.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Neumann quantum graph spectrum by secular function root finding.
    Quantum {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        kmin: f64,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: f64,
        /// Grid step of the sign-change scan.
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid: f64,
        /// Write the sampled secular function as CSV here.
        #[arg(long, value_name = "CSV")]
        emit_secular: Option<PathBuf>,
        /// Largest accepted root gap between the built-in variants.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print one member of the built-in pair as a graph file.
    Export {
        #[command(flatten)]
        builtin: BuiltinArgs,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        variant: u8,
        /// Include edge lengths equal to the weights.
        #[arg(long)]
        with_lengths: bool,
    },
}

/// What a successful command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Text for stdout.
    pub stdout: String,
    /// `Some(false)` turns into exit code 1.
    pub verdict: Option<bool>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Spectrum { source } => commands::spectrum(source),
        Command::Nodal {
            source,
            convention,
            zero_tol,
        } => commands::nodal(source, (*convention).into(), *zero_tol),
        Command::Isospectral { source, tol } => commands::isospectral(source, *tol),
        Command::Isonodal {
            source,
            convention,
            zero_tol,
        } => commands::isonodal(source, (*convention).into(), *zero_tol),
        Command::Polymap {
            source,
            coeffs,
            out,
            tol,
        } => commands::polymap(source, coeffs, out.as_deref(), *tol),
        Command::Quantum {
            source,
            kmin,
            kmax,
            grid,
            emit_secular,
            tol,
        } => commands::quantum(source, *kmin, *kmax, *grid, emit_secular.as_deref(), *tol),
        Command::Export {
            builtin,
            variant,
            with_lengths,
        } => commands::export(builtin, *variant, *with_lengths),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code together with stdout and stderr text.
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => (outcome.exit_code(), outcome.stdout, String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}

//! `goursat`: analysis, solvability checks, truncated solves and Borel diagnostics
//! for constant-coefficient operators in (t, z).
//!
//! Exit codes: 0 ok / bijective, 2 Fredholm only, 3 not Fredholm or not
//! uniquely solvable, 64 usage or parse error, 65 hypothesis not met,
//! 66 I/O error, 70 internal failure (including a failed verify battery).

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FREDHOLM_ONLY: u8 = 2;
pub const EXIT_NOT_FREDHOLM: u8 = 3;
pub const EXIT_PARSE: u8 = 64;
pub const EXIT_HYPOTHESIS: u8 = 65;
pub const EXIT_IO: u8 = 66;
pub const EXIT_INTERNAL: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "goursat", version, about = "Newton polygons, solvability and Borel diagnostics for Goursat problems")]
struct Cli {
    #[command(flatten)]
    config: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalFlags {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,
    /// Largest Toeplitz section checked by `check`.
    #[arg(long, global = true, default_value_t = 32)]
    nmax: usize,
    /// Seed for the randomized batteries of `verify`.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report file for analyze/check/verify; artifact directory for solve/borel.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Newton polygon, slopes, characteristic root groups and their consistency.
    Analyze {
        /// Operator text, or @FILE.
        operator: String,
    },
    /// Classify the normalized Goursat operator at (j, α) on the side of index s.
    Check {
        operator: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        alpha: u32,
    },
    /// Truncated exact solve; writes solution.series and solve_report.json.
    Solve {
        operator: String,
        #[command(flatten)]
        data: DataArgs,
        /// Output window "Kt,Kz".
        #[arg(long, default_value = "4,4")]
        window: String,
        /// Truncation of the linear system "Tt,Tz".
        #[arg(long, default_value = "16,16")]
        trunc: String,
    },
    /// Borel profile along a direction and the summability verdict;
    /// writes borel_profile.csv and summability.json.
    Borel {
        operator: String,
        #[command(flatten)]
        data: DataArgs,
        /// Direction d in radians.
        #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true)]
        direction: f64,
        /// t-truncation of the right-hand side.
        #[arg(long, default_value_t = 40)]
        trunc_t: u32,
    },
    /// Run the seeded property battery.
    Verify,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Series file for φ_k = ∂t^k u(0, z); repeat in order k = 0, 1, …
    #[arg(long)]
    pub phi: Vec<PathBuf>,
    /// Series file for ψ_β = ∂z^β u(t, 0); repeat in order β = 0, 1, …
    #[arg(long)]
    pub psi: Vec<PathBuf>,
    /// Series file for the right-hand side (zero if absent).
    #[arg(long)]
    pub rhs: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

/// Validated global settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub n_max: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn from_flags(f: GlobalFlags) -> Result<Self, CliError> {
        if f.precision < 64 {
            return Err(CliError::new(EXIT_PARSE, format!("--precision must be at least 64, got {}", f.precision)));
        }
        Ok(Self { precision_bits: f.precision, n_max: f.nmax, seed: f.seed, format: f.format, out: f.out })
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = RunConfig::from_flags(cli.config)?;
    match cli.command {
        Command::Analyze { operator } => commands::analyze(&cfg, &operator),
        Command::Check { operator, s, j, alpha } => commands::check(&cfg, &operator, &s, j, alpha),
        Command::Solve { operator, data, window, trunc } => commands::solve(&cfg, &operator, &data, &window, &trunc),
        Command::Borel { operator, data, direction, trunc_t } => commands::borel(&cfg, &operator, &data, direction, trunc_t),
        Command::Verify => commands::verify(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap uses 2 for usage errors; 2 is reserved for verdicts here
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

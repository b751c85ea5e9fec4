//! Superoscillation analyzer CLI.
//!
//! Subcommands: `analyze` (one criterion on one interval), `scan`
//! (Q-vs-endpoint profiles), `classify` (interval-sandwich verdict),
//! `wavenumber` (local-wavenumber report for trig polynomials), `catalog`
//! (list named waveforms). Output is JSON (default) or CSV on stdout.
//!
//! Exit codes: 0 success (pass and fail verdicts alike), 1 usage error,
//! 2 numeric failure, 3 criterion precondition not met, 4 function not
//! representable in the requested form.

mod commands;
mod output;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sine,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `b1:b2`, got `{s}`"))?;
    let lo: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("`{a}` is not a decimal literal"))?;
    let hi: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("`{b}` is not a decimal literal"))?;
    Ok((lo, hi))
}

/// Decide whether a bandlimited function superoscillates, and by how much.
#[derive(Parser)]
#[command(name = "superosc", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Quadrature tolerance for cross-validation and witnesses
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Cap on the number of local Fourier modes
    #[arg(long, global = true, default_value_t = 4096)]
    pub kmax: usize,

    /// Root-scan grid step (default: pi / (64 * band_edge))
    #[arg(long, global = true)]
    pub step: Option<f64>,

    /// Pass threshold for Q (strict inequality)
    #[arg(long, global = true, default_value_t = 0.5)]
    pub threshold: f64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    pub out: FormatArg,
}

#[derive(Subcommand)]
pub enum Command {
    /// Apply the sine or cosine criterion to one interval
    Analyze {
        /// Function expression, e.g. "im(g(2,10))" or "(cos(x)-0.5)^2"
        #[arg(long)]
        func: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Interval b1:b2 (decimal literals)
        #[arg(long, value_parser = parse_pair)]
        interval: (f64, f64),
        /// Reference level y = c (sine mode only)
        #[arg(long)]
        c: Option<f64>,
    },
    /// Q profile over consecutive zeros/extrema from an anchor
    Scan {
        #[arg(long)]
        func: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Anchor endpoint (a zero of f - c, or a critical point)
        #[arg(long)]
        anchor: f64,
        /// Reference level y = c (sine mode only)
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Right)]
        direction: DirectionArg,
        /// Point budget; when given without --stop-after-fails, the
        /// consecutive-fails rule is disabled so exactly this many points
        /// can be inspected
        #[arg(long)]
        max_points: Option<usize>,
        /// Stop after this many consecutive failing points (default 2;
        /// 0 disables the rule)
        #[arg(long)]
        stop_after_fails: Option<usize>,
    },
    /// Interval-sandwich verdict: does f superoscillate in the interval?
    Classify {
        #[arg(long)]
        func: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Target interval b1:b2
        #[arg(long, value_parser = parse_pair)]
        interval: (f64, f64),
        /// Reference level y = c (sine mode only)
        #[arg(long)]
        c: Option<f64>,
        /// Search window b1:b2 for the outer witness (default: target
        /// widened by two band-edge periods per side)
        #[arg(long, value_parser = parse_pair)]
        window: Option<(f64, f64)>,
    },
    /// Local-wavenumber report k(x) = Im(u'/u) for a trig polynomial
    Wavenumber {
        #[arg(long)]
        func: String,
        /// Sampling range b1:b2
        #[arg(long, value_parser = parse_pair)]
        range: (f64, f64),
        /// Number of uniform samples
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// List the named waveform catalog
    Catalog,
}

pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }

    pub fn representation(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    match commands::run(cli) {
        Ok(body) => {
            println!("{body}");
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

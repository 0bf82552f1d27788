mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Outcome, Report};

/// Exact verification of the Lorentz-covariant minimal-length algebra and
/// numerics for the deformed (1+1)-dimensional Dirac oscillator.
#[derive(Debug, Parser)]
#[command(name = "minlen", version)]
pub struct Cli {
    /// `key = value` file read before the command line; flags given on the
    /// command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the operator identities exactly in rational arithmetic.
    #[command(args_override_self = true)]
    VerifyAlgebra {
        /// Spatial dimensions.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
        dims: u8,
        #[arg(long, value_enum, default_value_t = Case::Symbolic)]
        case: Case,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form Dirac-oscillator spectrum.
    #[command(args_override_self = true)]
    Spectrum {
        #[command(flatten)]
        params: DoArgs,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        /// Allow beta-tilde >= 1 and flag the unphysical behaviour.
        #[arg(long)]
        diagnostic: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-component wavefunction of one level on the compact momentum grid.
    #[command(args_override_self = true)]
    Wavefunction {
        #[command(flatten)]
        params: DoArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        tau: i8,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Position-momentum uncertainty of computed eigenstates.
    #[command(args_override_self = true)]
    Uncertainty {
        #[command(flatten)]
        params: DoArgs,
        #[arg(long, default_value_t = 5)]
        n_max: u64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Distance of the spectrum from the undeformed one as beta-tilde shrinks.
    #[command(args_override_self = true)]
    Limits {
        /// Comma-separated beta-tilde values.
        #[arg(long, value_parser = parse_list)]
        beta_values: FloatList,
        #[arg(long)]
        omega_tilde: f64,
        #[arg(long, default_value_t = 20)]
        n_max: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    /// Covariant algebra, Poincaré generators and transformations.
    Symbolic,
    /// `β = γ = 0`, symbolic `β'`; needs `--dims 3`.
    Snyder,
    /// Euclidean mode.
    Kempf,
    /// `β = β' = γ = 0`.
    Undeformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Central2,
    Central4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn parse_list(s: &str) -> Result<FloatList, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(FloatList)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        Ok(t) => Err(format!("tolerance must be positive, got {t}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args)]
pub struct DoArgs {
    #[arg(long)]
    pub beta_tilde: f64,
    #[arg(long)]
    pub omega_tilde: f64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Intervals on the coarsest grid (even, at least 64).
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..))]
    pub grid_size: u32,
    /// Number of grid halvings used for extrapolation.
    #[arg(long, default_value_t = 2)]
    pub refinements: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::Central4)]
    pub scheme: SchemeArg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Pass threshold for the numerical checks of the command.
    #[arg(long, value_parser = parse_tol)]
    pub tol: Option<f64>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let hint = config::out_dir_hint(&argv);
    let argv = match config::merge(argv) {
        Ok(a) => a,
        Err(e) => {
            return usage_failure(hint, None, format!("error: {e:#}"));
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let hint = config::out_dir_hint(&argv).or(hint);
            let command = argv.iter().find(|a| config::COMMANDS.contains(&a.as_str())).cloned();
            return usage_failure(hint, command, e.render().to_string().trim().to_string());
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let report = commands::run(&cli.command);
    if report.outcome() == Outcome::Usage {
        if let Some(msg) = report.error_message() {
            eprintln!("error: {msg}");
        }
    }
    finish(report)
}

fn usage_failure(out_dir: Option<String>, command: Option<String>, message: String) -> ExitCode {
    eprintln!("{message}");
    let report = Report::usage(command.unwrap_or_default(), message);
    match out_dir {
        Some(dir) => finish(report.with_out_dir(PathBuf::from(dir))),
        None => ExitCode::from(Outcome::Usage.code()),
    }
}

fn finish(report: Report) -> ExitCode {
    if let Some(msg) = report.error_message().filter(|_| report.outcome() != Outcome::Usage) {
        eprintln!("error: {msg}");
    }
    let code = match report.write() {
        Ok(()) => report.outcome().code(),
        Err(e) => {
            eprintln!("error: writing report: {e:#}");
            Outcome::Fail.code()
        }
    };
    for line in report.summary_lines() {
        println!("{line}");
    }
    ExitCode::from(code)
}

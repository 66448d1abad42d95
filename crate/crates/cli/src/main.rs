//! `latwalk` command-line front end.

mod commands;
mod model;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latwalk::{Error, Mp};

use crate::render::Report;

pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "latwalk", version, about = "Lattice walks in orthants: counts, kernel diagonals and asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Step-set document or built-in model name.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Largest walk length (or series length).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// anywhere, origin or axes=<one-based list>.
    #[arg(long, global = true, default_value = "anywhere")]
    pub endpoint: String,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long = "precision-bits", global = true, default_value_t = 192)]
    pub precision_bits: u32,
    /// Number of expansion terms; searched automatically when omitted.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Walk counts by dynamic programming.
    Count,
    /// Diagonal coefficients of the kernel rational function, checked against the counts.
    Diagonal,
    /// Orbit sum, group and the rational function whose diagonal counts walks.
    Orbitsum,
    /// Contributing critical points with their residuals.
    Critical,
    /// Asymptotic expansion of the counting sequence.
    Asympt,
    /// Exact identities, asymptotics and an empirical fit, cross-compared.
    Verify,
    /// The stored table of models, or its reproduction with --check.
    Catalog {
        #[arg(long)]
        check: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count => "count",
            Command::Diagonal => "diagonal",
            Command::Orbitsum => "orbitsum",
            Command::Critical => "critical",
            Command::Asympt => "asympt",
            Command::Verify => "verify",
            Command::Catalog { .. } => "catalog",
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let c = &cli.common;
    match &cli.command {
        Command::Count => commands::count(c),
        Command::Diagonal => commands::diagonal(c),
        Command::Orbitsum => commands::orbitsum(c),
        Command::Critical => commands::critical(c),
        Command::Asympt => commands::asympt(c),
        Command::Verify => commands::verify(c),
        Command::Catalog { check } => commands::catalog(c, *check),
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.downcast_ref::<model::UsageError>().is_some()
        || matches!(
            e.downcast_ref::<Error>(),
            Some(Error::Parse(_) | Error::UnknownModel(_) | Error::InvalidStepSet(_))
        )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    Mp::set_working_precision(cli.common.precision_bits);
    if let Some(t) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) if is_usage(&e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => match e.downcast::<Error>() {
            Ok(Error::Unsupported(msg)) => Report::unsupported(cli.command.name(), &msg),
            Ok(other) => {
                eprintln!("error: {other}");
                return ExitCode::from(1);
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
        },
    };
    let text = match report.render(cli.common.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.common.out {
        Some(path) => render::write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.status.exit_code() as u8)
}

//! `layerfield`: decompose bipotent extensions, evaluate layered polynomials,
//! compute uniform closures and kernel membership from JSON inputs.
//!
//! Every input argument may be a file path, `-` for standard input, inline
//! JSON, or `@name` for a binding in the `--session` file. Shapes are
//! documented in `schemas/`.

mod commands;
mod error;
mod input;
mod report;
mod session;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::commands::parse_list;
use crate::error::CliError;
use crate::input::Inputs;
use crate::report::Report;
use crate::session::Session;

#[derive(Parser)]
#[command(name = "layerfield", version, about = "Exact computations in uniform layered semifields")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Include the derivation of each result field.
    #[arg(long, global = true)]
    notes: bool,
    /// Sample bound for tie and witness searches.
    #[arg(long, global = true, default_value_t = 8)]
    bound: u32,
    /// Session file with named bindings; successful commands are logged there.
    #[arg(long, global = true)]
    session: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a bipotent extension into free and torsion monomials.
    Decompose {
        #[arg(default_value = "-")]
        presentation: String,
    },
    /// Evaluate a layered polynomial at a scalar.
    Eval {
        poly: String,
        scalar: String,
        /// Check that scalar and coefficients lie in this domain first.
        #[arg(long)]
        descriptor: Option<String>,
    },
    /// Smallest uniform layered domain containing a descriptor and a scalar.
    Closure { descriptor: String, scalar: String },
    /// Whether a/b lies in the kernel of evaluation at an algebraic generator.
    Kernel { a: String, b: String, generator: String },
    /// Whether a descriptor is a uniform layered semifield.
    Semifield {
        #[arg(default_value = "-")]
        descriptor: String,
    },
    /// Order of a monomial modulo the base.
    TorsionDegree {
        presentation: String,
        /// Exponent vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        exps: String,
    },
    /// Extension rank over the base, a sub-presentation, or a generator subset.
    Rank {
        presentation: String,
        /// Presentation with the same base and a subset of the generators.
        #[arg(long, conflicts_with = "sub")]
        over: Option<String>,
        /// Generator indices (0-based, comma separated).
        #[arg(long)]
        sub: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Eval { .. } => "eval",
            Command::Closure { .. } => "closure",
            Command::Kernel { .. } => "kernel",
            Command::Semifield { .. } => "semifield",
            Command::TorsionDegree { .. } => "torsion-degree",
            Command::Rank { .. } => "rank",
        }
    }
}

fn dispatch(cli: &Cli, inputs: &Inputs) -> commands::Outcome {
    match &cli.command {
        Command::Decompose { presentation } => commands::decompose(inputs, presentation),
        Command::Eval { poly, scalar, descriptor } => commands::eval(inputs, poly, scalar, descriptor.as_deref()),
        Command::Closure { descriptor, scalar } => commands::closure(inputs, descriptor, scalar, cli.bound),
        Command::Kernel { a, b, generator } => commands::kernel(inputs, a, b, generator),
        Command::Semifield { descriptor } => commands::semifield(inputs, descriptor),
        Command::TorsionDegree { presentation, exps } => {
            commands::torsion_degree(inputs, presentation, &parse_list(exps, "exponent vector")?)
        }
        Command::Rank { presentation, over, sub } => {
            let sub = sub.as_deref().map(|s| parse_list(s, "generator indices")).transpose()?;
            commands::rank(inputs, presentation, over.as_deref(), sub.as_deref())
        }
    }
}

fn run(cli: &Cli, echo: Vec<String>) -> Result<Report, CliError> {
    let mut session = cli.session.as_deref().map(Session::open).transpose()?;
    let (result, notes) = dispatch(cli, &Inputs::new(session.as_ref()))?;
    if let Some(s) = session.as_mut() {
        s.record(echo.clone())?;
    }
    Ok(Report { command: echo, result, notes: if cli.notes { notes } else { Vec::new() } })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, echo) {
        Ok(report) => {
            print!("{}", if cli.json { report.to_json() } else { report.to_text() });
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                let mut err = json!({"command": cli.command.name(), "error": {"kind": e.kind(), "message": e.to_string()}});
                if let CliError::Parse { line, column, .. } = &e {
                    err["error"]["line"] = json!(line);
                    err["error"]["column"] = json!(column);
                }
                println!("{}", serde_json::to_string_pretty(&err).expect("error serializes"));
            }
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

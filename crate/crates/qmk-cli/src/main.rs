//! Command-line driver: define charts and fields in a text document, run
//! checks, and emit normalized reports and tables.

mod commands;
mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::{Format, Outcome};

#[derive(Parser)]
#[command(
    name = "qmk",
    version,
    about = "Symbolic checks for graded charts with a weight-one field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input chart document (tables file for `recover`)
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,

    /// Seed for the randomized samples of `verify-identities`
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(value: FormatArg) -> Format {
        match value {
            FormatArg::Text => Format::Text,
            FormatArg::Structured => Format::Structured,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that a field squares to zero
    CheckQ2 { field: String },
    /// Print the commutator, differential, bracket and anchor tables of a
    /// field on the canonical basis
    TwoLayer { field: String },
    /// Verify the identity suite of a field over the canonical basis and
    /// seeded random samples
    VerifyIdentities { field: String },
    /// Check the bracket/anchor axioms induced by a field on a chart with
    /// weights 0 and 1 only
    Axioms { field: String },
    /// Check that two fields are related under a named map
    Morphism {
        map: String,
        q1: String,
        q2: String,
    },
    /// Print the homotopy bracket tables on the quotient classes
    Linfty { field: String },
    /// Rebuild the field from a structured tables file and print it
    Recover,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            if !outcome.output.ends_with('\n') && !outcome.output.is_empty() {
                println!();
            }
            if outcome.exit_code == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Ok(value) = std::env::var("QMK_MAX_TERMS") {
        let limit: usize = value
            .parse()
            .with_context(|| format!("QMK_MAX_TERMS must be a positive integer, got `{value}`"))?;
        qmk_core::set_term_limit(Some(limit));
    }
    let input = cli
        .input
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("--input <FILE> is required"))?;
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let format = Format::from(cli.format);

    if let Command::Recover = cli.command {
        return commands::recover(&text, format);
    }

    let doc = document::parse_document(&text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", input.display()))?;
    match &cli.command {
        Command::CheckQ2 { field } => commands::check_q2(&doc, field, format),
        Command::TwoLayer { field } => commands::two_layer(&doc, field, format),
        Command::VerifyIdentities { field } => {
            commands::verify_identities(&doc, field, cli.seed, format)
        }
        Command::Axioms { field } => commands::axioms(&doc, field, format),
        Command::Morphism { map, q1, q2 } => commands::morphism(&doc, map, q1, q2, format),
        Command::Linfty { field } => commands::linfty(&doc, field, format),
        Command::Recover => unreachable!("handled above"),
    }
}

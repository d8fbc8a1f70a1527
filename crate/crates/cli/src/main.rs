use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use coble_cli::commands::{self, EnumerateKind, EvalKind, Format};
use coble_cli::run_suite;

#[derive(Parser)]
#[command(name = "coble", version, about = "Theta characteristics, Göpel systems and the Coble quartic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List characteristics, Göpel systems or Aronhold sets.
    Enumerate {
        #[arg(value_enum)]
        kind: EnumerateKind,
        #[arg(long = "g", default_value_t = 3)]
        genus: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate a theta function or quartic at (τ, z) read from JSON files.
    Eval {
        #[arg(value_enum)]
        kind: EvalKind,
        #[arg(long)]
        tau: PathBuf,
        /// Defaults to z = 0.
        #[arg(long)]
        z: Option<PathBuf>,
        #[arg(long = "char")]
        characteristic: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite; exits with status 0 iff every check passes.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Export a formula as JSON.
    Export {
        #[arg(value_enum)]
        what: ExportKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ExportKind {
    CobleFormula,
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Enumerate { kind, genus, format } => {
            emit(&commands::enumerate(kind, genus, format)?, None)?;
            Ok(true)
        }
        Command::Eval { kind, tau, z, characteristic, format } => {
            let tau = commands::load_tau(&tau)?;
            let z = z.as_deref().map(commands::load_z).transpose()?;
            emit(&commands::eval(kind, &tau, z.as_ref(), characteristic.as_deref(), format)?, None)?;
            Ok(true)
        }
        Command::Verify { suite, seed, samples, tol, report, format } => {
            let rep = run_suite(&suite, seed, samples, tol)?;
            if let Some(path) = &report {
                emit(&rep.to_json(), Some(path))?;
            }
            match format {
                Format::Json => emit(&rep.to_json(), None)?,
                Format::Text => print!("{}", rep.to_text()),
            }
            Ok(rep.pass)
        }
        Command::Export { what: ExportKind::CobleFormula, out } => {
            emit(&commands::export_coble_formula_json(), out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

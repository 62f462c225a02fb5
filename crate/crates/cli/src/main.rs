//! `mlfrac`: evaluation, sampling, path generation and the acceptance suite.
//!
//! Exit status: 0 on success, 1 when `verify` reports a failure, 2 on usage
//! or parameter errors.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{Format, Params, Usage};
use mlfrac::io::Table;

#[derive(Debug, Parser)]
#[command(name = "mlfrac", version, about = "Mittag-Leffler functions, fractional Poisson and generalized Laplacian processes")]
struct Cli {
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a function over `--grid start:stop:step`.
    Eval {
        #[arg(value_enum)]
        function: Function,
        #[command(flatten)]
        params: Params,
    },
    /// Draw `-n` variates from a law; CSV columns `index,value`.
    Sample {
        #[arg(value_enum)]
        law: LawName,
        #[command(flatten)]
        params: Params,
    },
    /// Simulate a process path.
    Path {
        #[arg(value_enum)]
        kind: PathKind,
        #[command(flatten)]
        params: Params,
    },
    /// Run the acceptance criteria.
    Verify {
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// E_α(−x)
    Ml,
    /// E_{α,β}(−x)
    Ml2,
    /// E^η_{α,β}(−x)
    Prabhakar,
    /// k-th derivative E_α^{(k)}(−x)
    Deriv,
    /// Mittag-Leffler law: pdf, cdf and survival at x
    Dist,
    /// Type-2 generalized Laplacian characteristic function at t
    Cf,
    /// Type-2 generalized Laplacian density at u
    Laplace2Pdf,
    /// q-Mittag-Leffler Laplace transform at t
    Qml,
    /// Fractional Poisson pmf P(N(t) = k), k = 0..kmax
    Fpp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawName {
    Ml,
    PositiveStable,
    GeneralizedMl,
    Laplace2,
    ArInnovation,
    QmlInnovation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathKind {
    /// Event times `(k, t_k)` of a fractional Poisson process on (0, tmax].
    Renewal,
    /// Generalized Laplacian AR(1) `(n, u_n)`.
    Ar1,
    /// q-Mittag-Leffler AR(1) `(n, y_n)`.
    Qml,
    /// AR(1) paths for (ρ, α) ∈ {(0.3, 0.3), (0.3, 1), (0.6, 0.6), (0.6, 0.9)}.
    Figures,
}

/// Output produced by a command.
pub enum Output {
    Table(Table),
    Report(mlfrac::verify::VerifyReport, String),
}

fn emit(output: &Output, params: &Params) -> Result<(), Usage> {
    let format = params.format.unwrap_or_default();
    let bytes = match (output, format) {
        (Output::Table(t), Format::Csv) => t.to_csv_string(),
        (Output::Table(t), Format::Json) => serde_json::to_string_pretty(&t.to_json()).expect("table serializes") + "\n",
        (Output::Report(_, text), Format::Csv) => text.clone(),
        (Output::Report(r, _), Format::Json) => r.to_json() + "\n",
    };
    match &params.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not an error worth reporting
            let _ = out.write_all(bytes.as_bytes()).and_then(|_| out.flush());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    let file = match &cli.config {
        Some(path) => Some(Params::load(path)?),
        None => None,
    };
    let merge = |p: Params| match &file {
        Some(f) => p.merge(f.clone()),
        None => p,
    };
    let (output, params) = match cli.command {
        Command::Eval { function, params } => {
            let p = merge(params);
            (commands::eval(function, &p)?, p)
        }
        Command::Sample { law, params } => {
            let p = merge(params);
            (commands::sample(law, &p)?, p)
        }
        Command::Path { kind, params } => {
            let p = merge(params);
            (commands::path(kind, &p)?, p)
        }
        Command::Verify { params } => {
            let p = merge(params);
            (commands::verify(&p)?, p)
        }
    };
    emit(&output, &params)?;
    let failed = matches!(&output, Output::Report(r, _) if r.failed());
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("mlfrac: {msg}");
            ExitCode::from(2)
        }
    }
}

//! `jcm`: CSV time series and consistency checks for the Jaynes-Cummings
//! population inversion.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage error, 3 numerical failure.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Outcome};
use config::{CommonArgs, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "jcm", version, about = "Jaynes-Cummings collapse and revival: series, integral forms, thermal corrections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated Fock sum (and the envelope approximation on resonance).
    Series(CommonArgs),
    /// Integral representations with conditioning diagnostics.
    Integrals(CommonArgs),
    /// Low-temperature corrections P1, P2 and the corrected P_g.
    Thermal(CommonArgs),
    /// Identity, residual and limit checks.
    Check(CommonArgs),
}

fn emit(rc: &RunConfig, text: &str) -> Result<(), Failure> {
    match &rc.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Numerical(format!("cannot write output: {e}")))
        }
    }
}

fn run(name: &'static str, args: &CommonArgs, f: fn(&RunConfig) -> Result<Outcome, Failure>) -> Result<(), Failure> {
    let rc = RunConfig::resolve(name, args).map_err(Failure::Usage)?;
    if let Some(path) = &rc.out {
        // fail before computing if the destination is not writable
        std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(rc.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {} worker threads: {e}", rc.jobs.unwrap_or(0))))?;
    let outcome = pool.install(|| f(&rc))?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    emit(&rc, &outcome.text)?;
    match outcome.failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Series(a) => run("series", a, commands::series),
        Command::Integrals(a) => run("integrals", a, commands::integrals),
        Command::Thermal(a) => run("thermal", a, commands::thermal),
        Command::Check(a) => run("check", a, commands::check),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Numerical(m) => eprintln!("numerical failure: {m}"),
                Failure::Check => eprintln!("check failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}

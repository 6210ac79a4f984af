mod args;
mod commands;

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use args::{resolve_case, resolve_sweep, Cli, Command, ConfigFile, Output};
use commands::Report;

const USAGE: u8 = 1;
const VERIFICATION: u8 = 2;

fn configure_threads(cfg: &ConfigFile) -> Result<()> {
    let threads = match std::env::var("DOLDLAB_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| anyhow!("DOLDLAB_THREADS must be a positive integer, got '{v}'"))?),
        Err(_) => cfg.get::<usize>("threads")?,
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(anyhow!("thread count must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(Report, Output)> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    configure_threads(&cfg)?;
    match &cli.command {
        Command::Verify(a) => {
            let (config, output) = resolve_sweep(a, &cfg)?;
            Ok((commands::verify(&config, output.format)?, output))
        }
        Command::Betti(a) | Command::Homology(a) | Command::Presentation(a) | Command::Ktheory(a) => {
            let case = resolve_case(a, &cfg)?;
            let report = match &cli.command {
                Command::Betti(_) => commands::betti(&case)?,
                Command::Homology(_) => commands::homology(&case)?,
                Command::Presentation(_) => commands::presentation_cmd(&case)?,
                _ => commands::ktheory(&case)?,
            };
            Ok((report, case.output))
        }
    }
}

fn emit(report: &Report, output: &Output) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, &report.body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", report.body);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    let (report, output) = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            eprintln!("run 'doldlab --help' for usage");
            return ExitCode::from(USAGE);
        }
    };
    if let Err(e) = emit(&report, &output) {
        eprintln!("error: {e:#}");
        return ExitCode::from(USAGE);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed in {} case(s):", report.failures.len());
        for f in &report.failures {
            eprintln!("  {f}");
        }
        ExitCode::from(VERIFICATION)
    }
}

//! Command-line driver: argument parsing, configuration, the worker pool and
//! output routing. Exit codes: 0 success, 1 a checked bound failed (or a run
//! error), 2 usage error.

pub mod commands;
pub mod config;
pub mod output;

use clap::error::ErrorKind;
use clap::Parser;
use commands::{execute, Cli, CommandError, Report};
use config::{load_config, RunConfig};
use std::io::Write;
use std::path::Path;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn resolve(cli: &Cli) -> Result<RunConfig, CommandError> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path).map_err(|e| CommandError::Usage(e.to_string()))?,
        None => RunConfig::default(),
    };
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(b) = cli.budget {
        cfg.budget_seconds = Some(b);
    }
    if let Some(p) = &cli.output {
        cfg.output_path = Some(p.clone());
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    Ok(cfg)
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), CommandError> {
    let io = |e: std::io::Error| CommandError::Io(e.to_string());
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CommandError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}

fn deliver(report: &Report, cfg: &RunConfig) -> Result<(), CommandError> {
    write_to(cfg.output_path.as_deref(), &report.text)?;
    match &report.side {
        Some((Some(path), doc)) => write_to(Some(path), doc)?,
        Some((None, doc)) => eprint!("{doc}"),
        None => {}
    }
    if !report.note.is_empty() {
        eprintln!("{}", report.note);
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CommandError> {
    let cfg = resolve(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CommandError::Io(format!("cannot start {} worker threads: {e}", cfg.threads)))?;
    let report = pool.install(|| execute(&cli.command, &cfg))?;
    deliver(&report, &cfg)?;
    Ok(report.ok)
}

/// Parse `argv` (program name first), run the subcommand and return the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match run(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("error: a checked bound failed");
            EXIT_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

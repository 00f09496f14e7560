//! Command-line front end for the `physdist-core` experiments.
//!
//! Every subcommand validates its parameters before computing, writes
//! deterministic CSV (and PGM) files into the output directory and finishes
//! with a `run_manifest.txt` that records the command line and wall time.

pub mod basis_io;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

pub use cli::{Cli, Command};
pub use error::{CliError, CliResult};

use commands::Env;

/// Parses `argv` (program name first), applies the config file and runs the command.
pub fn parse(argv: &[OsString]) -> Result<Cli, clap::Error> {
    let cli = Cli::try_parse_from(argv)?;
    let Some(path) = cli.config.clone() else {
        return Ok(cli);
    };
    let extra = config::load(&path)
        .map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n")))?;
    let mut full = argv.to_vec();
    full.extend(extra.into_iter().map(OsString::from));
    Cli::try_parse_from(full)
}

pub fn execute(cli: &Cli, argv: &[String], stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| {
            CliError::usage(format!("cannot start {} worker threads: {e}", cli.threads))
        })?;
    let threads = pool.current_num_threads();
    let (result, output) = pool.install(|| {
        let mut env = Env {
            out_dir: cli.out_dir.clone(),
            output: None,
            stdout,
            command: command_name(&cli.command),
        };
        let r = match &cli.command {
            Command::Ot(a) => commands::ot::run(a, &mut env),
            Command::RotorEvolve(a) => commands::rotor::evolve(a, &mut env),
            Command::RotorScan(a) => commands::rotor::scan(a, &mut env),
            Command::BhSection(a) => commands::bh::section(a, &mut env),
            Command::BhChaos(a) => commands::bh::chaos(a, &mut env),
            Command::Spin(a) => commands::spin::run(a, &mut env),
            Command::ExportBasis(a) => commands::basis::run(a, &mut env),
        };
        (r, env.output)
    });
    result?;
    if let Some(out) = output {
        out.manifest(argv, threads, start.elapsed())?;
    }
    Ok(())
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ot(_) => "ot",
        Command::RotorEvolve(_) => "rotor-evolve",
        Command::RotorScan(_) => "rotor-scan",
        Command::BhSection(_) => "bh-section",
        Command::BhChaos(_) => "bh-chaos",
        Command::Spin(_) => "spin",
        Command::ExportBasis(_) => "export-basis",
    }
}

/// Full run with exit-code mapping: 0 success, 2 validation, 3 resource or
/// convergence failure, 1 IO.
pub fn main_with(
    argv: Vec<OsString>,
    stdout: &mut (dyn Write + Send),
    stderr: &mut dyn Write,
) -> u8 {
    let cli = match parse(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                error::EXIT_VALIDATION
            } else {
                0
            };
        }
    };
    let text: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match execute(&cli, &text, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

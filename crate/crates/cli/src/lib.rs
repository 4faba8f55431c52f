//! The `firebreak` command line: simulate games, measure growth, search for
//! escape certificates and free semigroups, run whole suites, and validate
//! traces.
//!
//! Every command reads the same TOML experiment config (see
//! [`config::ExperimentConfig`]) and prints either an aligned table or JSON
//! records. Outputs carry the tool version and the SHA-256 of the effective
//! config, and are byte-for-byte reproducible.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Overrides};
pub use error::{CliError, ExitStatus};
use output::{Format, Output};

#[derive(Debug, Parser)]
#[command(
    name = "firebreak",
    version,
    about = "Firefighter containment experiments on infinite graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play the configured strategy and write the trace and report.
    Simulate(CommonArgs),
    /// Ball growth, fitted degree and Følner ratios.
    Growth(CommonArgs),
    /// Exhaustive search for an escape certificate on a truncated ball.
    Certify(CommonArgs),
    /// Freeness of a two-generator semigroup, or a search for a free pair.
    Semigroup(CommonArgs),
    /// Run every config in a directory and print one summary row each.
    Suite(CommonArgs),
    /// Check a trace file against the game rules.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Config file (a directory for `suite`).
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for output files; overrides `output.dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub cap_vertices: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Trace in JSON Lines format.
    pub trace: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            horizon: self.horizon,
            cap_vertices: self.cap_vertices,
            seed: self.seed,
        }
    }

    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        cfg.apply(&self.overrides());
        if let Some(dir) = &self.out {
            cfg.output.dir = Some(dir.clone());
        }
        Ok(cfg)
    }
}

fn emit(
    out: Output,
    format: Format,
    dir: Option<&PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(dir) = dir {
        out.write_files(dir)?;
    }
    stdout
        .write_all(out.render(format).as_bytes())
        .map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        })
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let single = |args: &CommonArgs,
                  f: fn(&ExperimentConfig) -> Result<Output, CliError>,
                  stdout: &mut dyn Write| {
        let cfg = args.load()?;
        let out = f(&cfg)?;
        emit(out, args.format, cfg.output.dir.as_ref(), stdout)
    };
    match &cli.command {
        Command::Simulate(a) => single(a, commands::simulate, stdout),
        Command::Growth(a) => single(a, commands::growth, stdout),
        Command::Certify(a) => single(a, commands::certify, stdout),
        Command::Semigroup(a) => single(a, commands::semigroup, stdout),
        Command::Suite(a) => {
            let out = commands::suite(&a.config, &a.overrides())?;
            emit(out, a.format, a.out.as_ref(), stdout)
        }
        Command::Validate(a) => emit(commands::validate(&a.trace)?, a.format, None, stdout),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Help and version requests succeed; any other argument
/// error is a usage error.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                ExitStatus::Usage
            } else {
                ExitStatus::Success
            };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code as i32;
        }
    };
    match run(cli, stdout) {
        Ok(()) => ExitStatus::Success as i32,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            e.status() as i32
        }
    }
}

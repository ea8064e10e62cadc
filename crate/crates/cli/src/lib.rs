//! The `covlab` command line: loads JSON instances, drives the library and
//! writes CSV reports.
//!
//! Exit status is 0 on success, 1 on a validation or property failure, 2 on
//! usage and guard refusals, and 3 when a replay finds no stable index
//! inside its truncation.

pub mod commands;
pub mod error;
pub mod instance;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use covlab_core::guards::Guards;
use covlab_core::rational::parse_rational;
use covlab_core::Rational;

use crate::commands::{InvariantFlags, Replay, ReplayArgs};
use crate::error::{CliError, CliResult, Status};
use crate::instance::GridSpec;

#[derive(Parser, Debug)]
#[command(
    name = "covlab",
    version,
    about = "Covering combinatorics of uniform spaces and group actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Io {
    /// Instance file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Report file (CSV); stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an instance and summarise it.
    Check {
        #[command(flatten)]
        io: Io,
    },
    /// Matching and complexity invariants of a dynamical instance.
    Invariants {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        mu: bool,
        #[arg(long)]
        omega: bool,
        /// Free-product ratio over the whole group for the finest base.
        #[arg(long)]
        ratio: bool,
        /// Refuse instances outside the exhaustive guards.
        #[arg(long)]
        exact: bool,
    },
    /// Covering numbers of a metric instance over a radius grid.
    Gamma {
        #[command(flatten)]
        io: Io,
        /// Radii BASE^-FROM .. BASE^-TO.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
    },
    /// Slope of log covering numbers against log inverse radius.
    Dimension {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
    },
    /// Word-count entropy trace of a subshift.
    Entropy {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 15)]
        nmax: usize,
        /// Compare generator balls of radii A,B.
        #[arg(long, value_parser = parse_pair)]
        radii: Option<(usize, usize)>,
    },
    /// Replay a witness construction step by step.
    Replay {
        which: ReplayKind,
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = parse_eps)]
        eps: Option<Rational>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the seeded property battery.
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Cases per family, overriding the defaults.
        #[arg(long)]
        cases: Option<usize>,
        /// Upper bound on generated ground sizes.
        #[arg(long)]
        max_ground: Option<usize>,
        /// Directory for reproduction files; defaults to the report's.
        #[arg(long)]
        repro_dir: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReplayKind {
    Thm65,
    Thm82,
    Thm93,
}

fn parse_eps(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r <= Rational::from_integer(0) {
        return Err(format!("eps must be positive, got {s}"));
    }
    Ok(r)
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    GridSpec::parse(s).map_err(|e| e.message)
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected A,B, got `{s}`"))?;
    let p = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a natural number"))
    };
    Ok((p(a)?, p(b)?))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                Status::Usage.code()
            } else {
                Status::Ok.code()
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("covlab: {e}");
            e.status.code()
        }
    }
}

fn dispatch(command: Command) -> CliResult<Status> {
    let guards = Guards::from_env();
    let load = |io: &Io| instance::load(&io.input, &guards);
    let (report, status, output) = match command {
        Command::Check { io } => {
            let (r, s) = commands::check(&load(&io)?)?;
            (r, s, io.output)
        }
        Command::Invariants {
            io,
            mu,
            omega,
            ratio,
            exact,
        } => {
            let flags = InvariantFlags {
                mu,
                omega,
                ratio,
                exact,
            };
            let (r, s) = commands::invariants(&load(&io)?, flags, &guards)?;
            (r, s, io.output)
        }
        Command::Gamma { io, grid } => {
            let (r, s) = commands::gamma_sweep(&load(&io)?, grid)?;
            (r, s, io.output)
        }
        Command::Dimension { io, grid } => {
            let (r, s) = commands::dimension(&load(&io)?, grid)?;
            (r, s, io.output)
        }
        Command::Entropy { io, nmax, radii } => {
            let (r, s) = commands::entropy(&load(&io)?, nmax, radii)?;
            (r, s, io.output)
        }
        Command::Replay {
            which,
            io,
            eps,
            nmax,
            seed,
        } => {
            let which = match which {
                ReplayKind::Thm65 => Replay::Thm65,
                ReplayKind::Thm82 => Replay::Thm82,
                ReplayKind::Thm93 => Replay::Thm93,
            };
            let args = ReplayArgs {
                eps,
                n_max: nmax,
                seed,
            };
            let (r, s) = commands::replay(&load(&io)?, which, &args)?;
            (r, s, io.output)
        }
        Command::Suite {
            seed,
            output,
            workers,
            cases,
            max_ground,
            repro_dir,
            inject_fault,
        } => {
            if workers == 0 {
                return Err(CliError::usage("--workers must be at least 1"));
            }
            let cfg = suite::SuiteConfig {
                seed,
                workers,
                cases,
                max_ground,
                repro_dir: repro_dir.unwrap_or_else(|| suite::default_repro_dir(output.as_deref())),
                inject_fault,
            };
            let out = suite::run(&cfg, &guards)?;
            if let Some(p) = &out.repro {
                eprintln!(
                    "covlab: property violated; counterexample written to {}",
                    p.display()
                );
            }
            let status = suite::status(&out);
            (out.report, status, output)
        }
    };
    report.emit(output.as_deref())?;
    if status == Status::Inconclusive {
        eprintln!("covlab: inconclusive: no stable index within the truncation");
    }
    Ok(status)
}

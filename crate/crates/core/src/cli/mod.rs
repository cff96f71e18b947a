//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns what should be printed and the exit code, so the binary stays
//! a thin wrapper and tests can drive every command in-process.
//!
//! Exit codes: `0` all checks pass, `1` a mathematical violation, `2` bad
//! input (unreadable file, malformed JSON, unknown family, bad flags).

mod commands;
mod files;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use files::{
    parse_json, Certification, CircleSpec, ConfigFile, FileKind, InputError, LineSpec, LoadError, Loaded, MapSpec,
    PairingSpec, ScheduleSpec,
};
pub use output::{cloud_csv, format_f64, parse_cloud_csv, to_json, CloudRows, CLOUD_HEADER, TRUNCATED_MARKER};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "schottky", version, about = "Build and check Schottky groups from circle configurations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check disjointness, (S1), (S2), (S3) and the pairings of a configuration.
    Validate(ValidateArgs),
    /// Write a limit-set point cloud as CSV.
    Limitset(LimitsetArgs),
    /// Run the group checks: freeness, precise invariance, round trips, probe.
    Check(CheckArgs),
    /// Write a built-in family as a configuration file.
    Example(ExampleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    /// Configuration file (JSON).
    pub config: PathBuf,
    /// Truncation level for schedules (default: all levels of the file).
    #[arg(long)]
    pub level: Option<usize>,
    /// ε for the N_ε search of (S1).
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LimitsetArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub level: Option<usize>,
    /// Emit a disk once its chordal diameter is at most this.
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    #[arg(long, default_value_t = 32)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_points: usize,
    /// Worker threads (the output does not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Free,
    Invariance,
    Fundamental,
    Probe,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Longest word for the freeness, invariance and round-trip suites.
    #[arg(long, default_value_t = 6)]
    pub word_len: usize,
    /// Sample points for invariance, and trials for round trips.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub level: Option<usize>,
    /// Test circle of the probe as `re,im,radius`.
    #[arg(long, default_value = "0,0,1", value_parser = parse_triple)]
    pub probe_circle: [f64; 3],
    /// Base point of the probe as `re,im`.
    #[arg(long, default_value = "0,0", value_parser = parse_pair)]
    pub probe_base: [f64; 2],
    /// Longest word for the probe orbit.
    #[arg(long, default_value_t = 2)]
    pub probe_len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExampleArgs {
    /// classical-rank-g, accumulating-point or unit-circle-counterexample.
    pub name: String,
    #[arg(long)]
    pub g: Option<usize>,
    #[arg(long)]
    pub spacing: Option<f64>,
    #[arg(long)]
    pub re: Option<f64>,
    #[arg(long)]
    pub im: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    parse_floats(s)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_floats(s)
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, stdout: String, stderr: String) -> Self {
        Self { code, stdout, stderr }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::new(EXIT_INPUT, String::new(), text)
            } else {
                Outcome::new(EXIT_PASS, text, String::new())
            };
        }
    };
    match cli.command {
        Command::Validate(args) => commands::validate(&args),
        Command::Limitset(args) => commands::limitset(&args),
        Command::Check(args) => commands::check(&args),
        Command::Example(args) => commands::example(&args),
    }
}

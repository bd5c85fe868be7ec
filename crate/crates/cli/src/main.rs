//! `rldc`: measure local decoders, derive LDC decoders from relaxed ones, and
//! print bound tables.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rldc_core::rational::{self, Rational};

#[derive(Parser, Debug)]
#[command(name = "rldc", version, about = "Exact verification of relaxed and standard local decoders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    rational::parse(text).map_err(|e| e.to_string())
}

/// Where the code and decoder come from. `--code` and `--decoder` take a
/// file path or a built-in fixture name.
#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("src").required(true).args(["fixture", "code"])))]
pub struct Source {
    /// Built-in fixture supplying both code and decoder.
    #[arg(long, conflicts_with_all = ["code", "decoder"])]
    pub fixture: Option<String>,
    #[arg(long, requires = "decoder")]
    pub code: Option<String>,
    #[arg(long)]
    pub decoder: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ldc,
    Rldc,
    Lcc,
    Rlcc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Uniform,
    Lex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Keep a symbol only when all runs agree on it.
    Repeat,
    /// Majority of runs; the decoder must never answer ⊥.
    Majority,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Perfect,
    Imperfect,
    Tq,
    LdcAmplify,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("radius_spec").required(true).args(["radius", "radius_fraction"])))]
#[command(group(ArgGroup::new("adversary").args(["exact", "heuristic", "monte_carlo"])))]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long)]
    pub radius: Option<usize>,
    /// Radius as a fraction of n, rounded down.
    #[arg(long, value_parser = parse_rational)]
    pub radius_fraction: Option<Rational>,
    /// Full enumeration with exact output laws (default).
    #[arg(long)]
    pub exact: bool,
    /// Greedy ascent with this many seeded restarts; reports a lower bound.
    #[arg(long, value_name = "RESTARTS")]
    pub heuristic: Option<usize>,
    /// Estimate failure probabilities from this many samples per word.
    #[arg(long, value_name = "SAMPLES")]
    pub monte_carlo: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Maximum word-target evaluations in exact mode.
    #[arg(long)]
    pub budget: Option<u128>,
    /// Measure every radius from 0 up to the requested one.
    #[arg(long)]
    pub sweep: bool,
    /// Fail (exit 1) if the measured soundness exceeds this value.
    #[arg(long, value_parser = parse_rational)]
    pub claim: Option<Rational>,
    /// Relaxed decoder the measured one was derived from; enables the
    /// derived-decoder error bound per radius.
    #[arg(long, requires = "delta")]
    pub bound_from: Option<String>,
    #[arg(long, value_parser = parse_rational)]
    pub delta: Option<Rational>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_parser = parse_rational)]
    pub delta: Rational,
    /// Skip the canonical-input check (for decoders without perfect completeness).
    #[arg(long)]
    pub unchecked: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TqArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_parser = parse_rational)]
    pub delta: Rational,
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    pub tie: TieArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AmplifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value = "repeat")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "uniform")]
    pub tie: TieArg,
    /// Maximum number of product entries per target.
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CanonicalizeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("point").required(true).args(["message", "word"])))]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub target: usize,
    #[arg(long, value_parser = parse_rational)]
    pub delta: Rational,
    /// Message whose codeword fixes the light view.
    #[arg(long)]
    pub message: Option<String>,
    /// Codeword fixing the light view.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub theorem: Theorem,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub sigma: usize,
    #[arg(long, value_parser = parse_rational)]
    pub s: Rational,
    #[arg(long, value_parser = parse_rational)]
    pub r: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    pub delta: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    pub eps: Option<Rational>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("action").required(true).multiple(true).args(["out_dir", "verify_all"])))]
pub struct FixturesArgs {
    /// Write each fixture's code and decoder as JSON into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Re-measure every documented parameter; exit 1 on any mismatch.
    #[arg(long)]
    pub verify_all: bool,
    /// Restrict to these fixtures.
    #[arg(long)]
    pub name: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure completeness and soundness (or LDC error) at a radius.
    Verify(VerifyArgs),
    /// Build the LDC decoder that reads only light coordinates.
    Derive(DeriveArgs),
    /// Build the t-sample majority decoder over light patterns.
    Tq(TqArgs),
    /// Amplify by repetition (relaxed) or majority (standard).
    Amplify(AmplifyArgs),
    /// Rewrite tables into canonical form.
    Canonicalize(CanonicalizeArgs),
    /// Dump light-pattern classes for one target at one codeword.
    Classify(ClassifyArgs),
    /// Evaluate a closed-form bound.
    Bounds(BoundsArgs),
    /// Emit or re-verify the built-in fixtures.
    Fixtures(FixturesArgs),
}

/// How a run ended short of success.
#[derive(Debug)]
pub enum Failure {
    /// Bad flag combination; exit 2.
    Usage(String),
    /// The tool ran but a property failed, or I/O broke; exit 1.
    Failed(String),
}

impl From<rldc_core::Error> for Failure {
    fn from(e: rldc_core::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Derive(a) => commands::derive(a),
        Command::Tq(a) => commands::tq(a),
        Command::Amplify(a) => commands::amplify(a),
        Command::Canonicalize(a) => commands::canonicalize(a),
        Command::Classify(a) => commands::classify(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Fixtures(a) => commands::fixtures(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

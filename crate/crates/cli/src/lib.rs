//! Command-line front end for the spuridium solver.
//!
//! `solve` runs a dense basis-size scan or a Lanczos run and reports the
//! squared-operator diagnostic and verdict of every tracked state;
//! `classify` re-judges an existing report under new thresholds;
//! `sumrule` checks basis adequacy with the dipole sum rule.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_classify, cmd_solve, cmd_sumrule, ClassifyOverrides};
use crate::config::{Format, MapChoice, ProblemKind, RunConfig, SolverKind, StartChoice};
pub use crate::error::CliError;
use crate::report::{write_output, Report};

#[derive(Debug, Parser)]
#[command(name = "spuridium", version, about = "Finite-basis eigensolver with spurious-state detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem and classify every tracked state.
    #[command(allow_negative_numbers = true)]
    Solve(RunArgs),
    /// Re-classify an existing report.
    #[command(allow_negative_numbers = true)]
    Classify(ClassifyArgs),
    /// Dipole sum rule at each basis size.
    #[command(allow_negative_numbers = true)]
    Sumrule(RunArgs),
}

/// Flags mirror the configuration file; flags win over `--config`.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub problem: Option<ProblemKind>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub ell: Option<u32>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Pöschl-Teller inverse width.
    #[arg(long)]
    pub a: Option<f64>,
    /// Square-well depth.
    #[arg(long)]
    pub depth: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub kappa: Option<i32>,
    /// Speed of light (Dirac).
    #[arg(long)]
    pub c: Option<f64>,
    /// Single basis size.
    #[arg(long, conflicts_with = "scan")]
    pub n: Option<usize>,
    /// Comma-separated, strictly increasing basis sizes.
    #[arg(long, value_delimiter = ',')]
    pub scan: Option<Vec<usize>>,
    #[arg(long = "box")]
    pub box_length: Option<f64>,
    #[arg(long, value_enum)]
    pub map: Option<MapChoice>,
    #[arg(long)]
    pub map_strength: Option<f64>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverKind>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub start: Option<StartChoice>,
    #[arg(long)]
    pub tol_bound: Option<f64>,
    #[arg(long)]
    pub plateau_factor: Option<f64>,
    #[arg(long)]
    pub oversampling: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Report produced by `solve` (CSV or JSON).
    pub report: PathBuf,
    #[arg(long)]
    pub tol_bound: Option<f64>,
    #[arg(long)]
    pub plateau_factor: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Defaults to the format of the input report.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl RunArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let p = &mut cfg.problem;
        set(&mut p.kind, self.problem);
        set(&mut p.omega, self.omega);
        set(&mut p.z, self.z);
        set(&mut p.ell, self.ell);
        set(&mut p.lambda, self.lambda);
        set(&mut p.a, self.a);
        set(&mut p.depth, self.depth);
        set(&mut p.width, self.width);
        set(&mut p.kappa, self.kappa);
        set(&mut p.c, self.c);
        let b = &mut cfg.basis;
        set(&mut b.sizes, self.n.map(|n| vec![n]).or(self.scan));
        set(&mut b.box_length, self.box_length);
        set(&mut b.map, self.map);
        set(&mut b.map_strength, self.map_strength);
        let s = &mut cfg.solver;
        set(&mut s.kind, self.solver);
        if self.max_iter.is_some() {
            s.max_iter = self.max_iter;
        }
        if self.seed.is_some() {
            s.seed = self.seed;
        }
        set(&mut s.start, self.start);
        let d = &mut cfg.diagnostics;
        set(&mut d.tol_bound, self.tol_bound);
        set(&mut d.plateau_factor, self.plateau_factor);
        set(&mut d.oversampling, self.oversampling);
        if self.output.is_some() {
            cfg.output.path = self.output;
        }
        set(&mut cfg.output.format, self.format);
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => {
            let config = args.resolve()?;
            let report = cmd_solve(&config)?;
            write_output(config.output.path.as_deref(), &report.encode(config.output.format))
        }
        Command::Classify(args) => {
            let text = std::fs::read_to_string(&args.report)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.report.display())))?;
            let input_format = if text.trim_start().starts_with('{') { Format::Json } else { Format::Csv };
            let report = Report::parse(&text)?;
            let overrides = ClassifyOverrides { tol_bound: args.tol_bound, plateau_factor: args.plateau_factor };
            let mut out = cmd_classify(&report, &overrides)?;
            out.metadata.wall_time_seconds = report.metadata.wall_time_seconds;
            write_output(args.output.as_deref(), &out.encode(args.format.unwrap_or(input_format)))
        }
        Command::Sumrule(args) => {
            let config = args.resolve()?;
            let report = cmd_sumrule(&config)?;
            write_output(config.output.path.as_deref(), &report.encode(config.output.format))
        }
    }
}

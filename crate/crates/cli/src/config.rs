//! Run configuration: JSON file, then command-line overrides, then
//! validation into core types.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spuridium_core::basis::{BasisKind, BasisSpec, DEFAULT_OVERSAMPLING};
use spuridium_core::diagnostics::ClassifyConfig;
use spuridium_core::eigensolve::StartVector;
use spuridium_core::hamiltonians::{DiracParams, Potential, Problem, SPEED_OF_LIGHT};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Harmonic,
    Hydrogen,
    PoschlTeller,
    SquareWell,
    DiracCoulomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MapChoice {
    None,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StartChoice {
    Ones,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    pub omega: f64,
    pub z: f64,
    pub ell: u32,
    pub lambda: f64,
    pub a: f64,
    pub depth: f64,
    pub width: f64,
    pub kappa: i32,
    pub c: f64,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            kind: ProblemKind::Harmonic,
            omega: 1.0,
            z: 1.0,
            ell: 0,
            lambda: 4.0,
            a: 1.0,
            depth: 1.0,
            width: 2.0,
            kappa: -1,
            c: SPEED_OF_LIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasisConfig {
    /// Basis sizes, strictly increasing. A single entry is a plain run.
    pub sizes: Vec<usize>,
    pub box_length: f64,
    pub map: MapChoice,
    pub map_strength: f64,
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self { sizes: vec![100], box_length: 20.0, map: MapChoice::None, map_strength: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub kind: SolverKind,
    /// Lanczos steps; defaults to the matrix dimension.
    pub max_iter: Option<usize>,
    /// Required for Lanczos runs.
    pub seed: Option<u64>,
    pub start: StartChoice,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { kind: SolverKind::Dense, max_iter: None, seed: None, start: StartChoice::Ones }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub tol_bound: f64,
    pub plateau_factor: f64,
    pub oversampling: usize,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        let c = ClassifyConfig::default();
        Self { tol_bound: c.tol_bound, plateau_factor: c.plateau_factor, oversampling: DEFAULT_OVERSAMPLING }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { path: None, format: Format::Csv }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub basis: BasisConfig,
    pub solver: SolverConfig,
    pub diagnostics: DiagnosticsConfig,
    pub output: OutputConfig,
}

/// A validated configuration with the core objects it describes.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub problem: Problem,
    /// One basis per scan size.
    pub bases: Vec<BasisSpec>,
    pub classify: ClassifyConfig,
    pub start: StartVector,
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Canonical single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        let p = &self.problem;
        let center = 0.5 * self.basis.box_length;
        let problem = match p.kind {
            ProblemKind::Harmonic => Potential::harmonic(p.omega, center).map(Problem::Schrodinger),
            ProblemKind::Hydrogen => Potential::coulomb(p.z, p.ell).map(Problem::Schrodinger),
            ProblemKind::PoschlTeller => Potential::poschl_teller(p.lambda, p.a, center).map(Problem::Schrodinger),
            ProblemKind::SquareWell => Potential::square_well(p.depth, p.width, center).map(Problem::Schrodinger),
            ProblemKind::DiracCoulomb => DiracParams::new(p.z, p.kappa, p.c).map(Problem::Dirac),
        };
        problem.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<Resolved, CliError> {
        let b = &self.basis;
        if b.sizes.is_empty() {
            return Err(CliError::Config("basis size list is empty".into()));
        }
        if !b.sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::Config(format!("scan list must be strictly increasing, got {:?}", b.sizes)));
        }
        positive("box length", b.box_length)?;
        let d = &self.diagnostics;
        positive("tol_bound", d.tol_bound)?;
        positive("plateau_factor", d.plateau_factor)?;
        if d.oversampling < 2 {
            return Err(CliError::Config(format!("oversampling must be at least 2, got {}", d.oversampling)));
        }
        let kind = match b.map {
            MapChoice::None => BasisKind::SineBox,
            MapChoice::Rational => BasisKind::MappedSine,
        };
        let strength = if b.map == MapChoice::None { 0.0 } else { b.map_strength };
        let bases = b
            .sizes
            .iter()
            .map(|&n| BasisSpec::new(kind, n, b.box_length, strength))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let problem = self.problem()?;

        let s = &self.solver;
        let mut start = StartVector::Ones;
        if s.kind == SolverKind::Lanczos {
            if b.sizes.len() != 1 {
                return Err(CliError::Config("Lanczos runs take a single basis size".into()));
            }
            let seed = s.seed.ok_or_else(|| CliError::Config("Lanczos runs require a seed".into()))?;
            let dim = problem.dimension(b.sizes[0]);
            if let Some(max_iter) = s.max_iter {
                if max_iter == 0 || max_iter > dim {
                    return Err(CliError::Config(format!("max_iter must lie in 1..={dim}, got {max_iter}")));
                }
            }
            if s.start == StartChoice::Random {
                start = StartVector::Random { seed };
            }
        }
        let classify = ClassifyConfig { tol_bound: d.tol_bound, plateau_factor: d.plateau_factor };
        Ok(Resolved { problem, bases, classify, start })
    }

    /// Lanczos step budget: `max_iter` or the full dimension.
    pub fn lanczos_steps(&self, dim: usize) -> usize {
        self.solver.max_iter.unwrap_or(dim)
    }
}

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sr2fista::{Algorithm, Backtracking, BetaMode};

use crate::error::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Two-block MCP instance, `d = 10000`.
    TwoBlock,
    QuadraticL1,
    QuadraticMcp,
    /// Diagonal quadratic read from a `weight,center` CSV.
    Custom,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::TwoBlock => "two_block",
            ProblemKind::QuadraticL1 => "quadratic_l1",
            ProblemKind::QuadraticMcp => "quadratic_mcp",
            ProblemKind::Custom => "custom",
        }
    }
}

impl FromStr for ProblemKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two_block" => Ok(ProblemKind::TwoBlock),
            "quadratic_l1" => Ok(ProblemKind::QuadraticL1),
            "quadratic_mcp" => Ok(ProblemKind::QuadraticMcp),
            "custom" => Ok(ProblemKind::Custom),
            _ => Err(BenchError::Config(format!("unknown problem '{s}'"))),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmChoice {
    Sr2Fista,
    Ista,
    Both,
}

impl AlgorithmChoice {
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgorithmChoice::Sr2Fista => vec![Algorithm::Sr2Fista],
            AlgorithmChoice::Ista => vec![Algorithm::Ista],
            AlgorithmChoice::Both => vec![Algorithm::Sr2Fista, Algorithm::Ista],
        }
    }
}

impl FromStr for AlgorithmChoice {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(AlgorithmChoice::Both),
            _ => match s.parse::<Algorithm>() {
                Ok(Algorithm::Sr2Fista) => Ok(AlgorithmChoice::Sr2Fista),
                Ok(Algorithm::Ista) => Ok(AlgorithmChoice::Ista),
                Err(_) => Err(BenchError::Config(format!("unknown algorithm '{s}'"))),
            },
        }
    }
}

/// Penalty for custom problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularizerKind {
    Zero,
    L1,
    Mcp,
    Scad,
}

impl FromStr for RegularizerKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(RegularizerKind::Zero),
            "l1" => Ok(RegularizerKind::L1),
            "mcp" => Ok(RegularizerKind::Mcp),
            "scad" => Ok(RegularizerKind::Scad),
            _ => Err(BenchError::Config(format!("unknown regularizer '{s}'"))),
        }
    }
}

/// Parameters of the random and custom instances.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceParams {
    pub dim: usize,
    pub mu_g: f64,
    pub lipschitz: f64,
    pub lambda: f64,
    /// MCP concavity `γ`.
    pub gamma: f64,
    /// SCAD shape `a`.
    pub scad_a: f64,
    pub regularizer: RegularizerKind,
    pub coeffs: Option<PathBuf>,
}

impl Default for InstanceParams {
    fn default() -> Self {
        Self {
            dim: 100,
            mu_g: 1.0,
            lipschitz: 1000.0,
            lambda: 1.0,
            gamma: 3.0,
            scad_a: 3.7,
            regularizer: RegularizerKind::L1,
            coeffs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub problem: ProblemKind,
    pub algorithm: AlgorithmChoice,
    pub beta_mode: BetaMode,
    pub max_iters: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub plot: bool,
    pub trace_every: usize,
    pub backtracking: Option<Backtracking>,
    pub instance: InstanceParams,
    /// Random triples drawn for the wDG certificate.
    pub wdg_samples: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            problem: ProblemKind::TwoBlock,
            algorithm: AlgorithmChoice::Both,
            beta_mode: BetaMode::Compromised,
            max_iters: 2000,
            seed: 0,
            output_dir: PathBuf::from("."),
            plot: false,
            trace_every: 1,
            backtracking: None,
            instance: InstanceParams::default(),
            wdg_samples: 200,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.max_iters == 0 {
            return Err(BenchError::Config("max_iters must be >= 1".into()));
        }
        if self.trace_every == 0 {
            return Err(BenchError::Config("trace_every must be >= 1".into()));
        }
        if self.problem == ProblemKind::Custom && self.instance.coeffs.is_none() {
            return Err(BenchError::Config(
                "custom problems need --coeffs FILE".into(),
            ));
        }
        Ok(())
    }
}

/// Parses `L0,FACTOR`.
pub fn parse_backtracking(s: &str) -> Result<Backtracking, BenchError> {
    let bad = || BenchError::Config(format!("expected L0,FACTOR, got '{s}'"));
    let (l0, factor) = s.split_once(',').ok_or_else(bad)?;
    let initial_lipschitz: f64 = l0.trim().parse().map_err(|_| bad())?;
    let increase_factor: f64 = factor.trim().parse().map_err(|_| bad())?;
    if !(initial_lipschitz > 0.0 && initial_lipschitz.is_finite() && increase_factor > 1.0) {
        return Err(BenchError::Config(format!(
            "need L0 > 0 and FACTOR > 1, got '{s}'"
        )));
    }
    Ok(Backtracking {
        increase_factor,
        initial_lipschitz,
    })
}

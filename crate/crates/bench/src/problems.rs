use std::path::Path;

use serde::Deserialize;
use sr2fista::zoo::{build_two_block, two_block_start, quadratic_l1, quadratic_mcp, separable_problem};
use sr2fista::{DiagonalQuadratic, McpParams, ProblemSpec, Regularizer, ScadParams};

use crate::config::{BenchConfig, InstanceParams, ProblemKind, RegularizerKind};
use crate::error::BenchError;

#[derive(Debug, Deserialize)]
struct CoefficientRow {
    weight: f64,
    center: f64,
}

/// Reads a headered CSV with `weight` and `center` columns.
pub fn load_coefficients(path: &Path) -> Result<DiagonalQuadratic, BenchError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(BenchError::csv(path))?;
    let mut weights = Vec::new();
    let mut centers = Vec::new();
    for row in reader.deserialize::<CoefficientRow>() {
        let row = row.map_err(BenchError::csv(path))?;
        weights.push(row.weight);
        centers.push(row.center);
    }
    if weights.is_empty() {
        return Err(BenchError::Config(format!(
            "{}: no coefficient rows",
            path.display()
        )));
    }
    DiagonalQuadratic::new(weights, centers).map_err(BenchError::solver(path.display().to_string()))
}

fn regularizer(inst: &InstanceParams) -> Result<Regularizer, sr2fista::Error> {
    Ok(match inst.regularizer {
        RegularizerKind::Zero => Regularizer::Zero,
        RegularizerKind::L1 => Regularizer::l1(inst.lambda)?,
        RegularizerKind::Mcp => Regularizer::Mcp(McpParams::new(inst.lambda, inst.gamma)?),
        RegularizerKind::Scad => Regularizer::Scad(ScadParams::new(inst.lambda, inst.scad_a)?),
    })
}

/// Builds the configured problem and its starting point `x₀ = 𝟙`.
pub fn build_problem(cfg: &BenchConfig) -> Result<(ProblemSpec, Vec<f64>), BenchError> {
    let inst = &cfg.instance;
    let wrap = BenchError::solver(format!("building {}", cfg.problem));
    let p = match cfg.problem {
        ProblemKind::TwoBlock => return Ok((build_two_block(), two_block_start())),
        ProblemKind::QuadraticL1 => {
            quadratic_l1(inst.dim, inst.mu_g, inst.lipschitz, inst.lambda, cfg.seed)
        }
        ProblemKind::QuadraticMcp => McpParams::new(inst.lambda, inst.gamma)
            .and_then(|mcp| quadratic_mcp(inst.dim, inst.mu_g, inst.lipschitz, mcp, cfg.seed)),
        ProblemKind::Custom => {
            let path = inst
                .coeffs
                .as_deref()
                .ok_or_else(|| BenchError::Config("custom problems need --coeffs FILE".into()))?;
            let q = load_coefficients(path)?;
            regularizer(inst).and_then(|h| separable_problem(q, h))
        }
    }
    .map_err(wrap)?;
    let d = p.dimension();
    Ok((p, vec![1.0; d]))
}

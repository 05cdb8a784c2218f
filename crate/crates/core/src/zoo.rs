//! Benchmark instances with known minimizers.
//!
//! Every instance here is a separable diagonal quadratic plus a separable
//! regularizer, so the minimizer is available coordinatewise through the
//! scalar prox: `x*ᵢ = prox_{h/wᵢ}(cᵢ)`.

use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::prox::{McpParams, Regularizer};
use crate::smooth::DiagonalQuadratic;

/// Dimension of the two-block MCP instance.
pub const TWO_BLOCK_DIM: usize = 10_000;

/// Minimizer of `½Σwᵢ(xᵢ − cᵢ)² + Σh(xᵢ)`.
///
/// Needs `wᵢ + μ_h > 0` for every coordinate, except that `wᵢ = 0` is
/// accepted since every penalty here is minimized at the origin.
pub fn separable_minimizer(q: &DiagonalQuadratic, h: &Regularizer) -> Result<Vec<f64>> {
    let mu_h = h.strong_convexity();
    q.weights()
        .iter()
        .zip(q.centers())
        .map(|(&w, &c)| {
            if w == 0.0 {
                Ok(0.0)
            } else if w + mu_h > 0.0 {
                h.scalar_prox(c, 1.0 / w)
            } else {
                Err(Error::InvalidArgument(format!(
                    "coordinate with weight {w} has no unique minimizer under mu_h = {mu_h}"
                )))
            }
        })
        .collect()
}

/// Builds the problem and attaches its minimizer.
pub fn separable_problem(q: DiagonalQuadratic, h: Regularizer) -> Result<ProblemSpec> {
    let x_star = separable_minimizer(&q, &h)?;
    let d = q.weights().len();
    ProblemSpec::new(Arc::new(q), Arc::new(h), d)?.with_optimum(x_star)
}

/// `g = ½Σᵢ i(xᵢ − 10)² + ½Σᵢ i(x₅₀₀₀₊ᵢ − 10⁻⁴)²` for `i = 1..5000`, and
/// `h = Σ MCP(xᵢ; λ = 2, γ = 3)`, so `L_g = 5000`, `μ_g = 1`, `μ_h = −1/3`.
/// The minimizer is `(10·𝟙, 0)`.
pub fn build_two_block() -> ProblemSpec {
    let half = TWO_BLOCK_DIM / 2;
    let weights: Vec<f64> = (1..=half).chain(1..=half).map(|i| i as f64).collect();
    let centers: Vec<f64> = std::iter::repeat_n(10.0, half)
        .chain(std::iter::repeat_n(1e-4, half))
        .collect();
    let q = DiagonalQuadratic::new(weights, centers).expect("fixed instance is valid");
    let h = Regularizer::Mcp(McpParams::new(2.0, 3.0).expect("fixed instance is valid"));
    separable_problem(q, h).expect("fixed instance is valid")
}

/// Starting point `x₀ = 𝟙` of the two-block instance.
pub fn two_block_start() -> Vec<f64> {
    vec![1.0; TWO_BLOCK_DIM]
}

/// Random diagonal quadratic with extreme weights exactly `mu_g` and `l_g`
/// (for `d ≥ 2`), interior weights uniform in between, centers in `[−5, 5]`.
pub fn random_diagonal(d: usize, mu_g: f64, l_g: f64, seed: u64) -> Result<DiagonalQuadratic> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    if !(0.0 <= mu_g && mu_g <= l_g && l_g > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= mu_g <= L_g, L_g > 0; got {mu_g}, {l_g}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<f64> = (0..d)
        .map(|_| {
            if mu_g < l_g {
                rng.random_range(mu_g..l_g)
            } else {
                l_g
            }
        })
        .collect();
    weights[0] = l_g;
    if d > 1 {
        weights[1] = mu_g;
    }
    let centers = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
    DiagonalQuadratic::new(weights, centers)
}

/// Random diagonal quadratic plus `λ‖x‖₁`.
pub fn quadratic_l1(d: usize, mu_g: f64, l_g: f64, lambda: f64, seed: u64) -> Result<ProblemSpec> {
    separable_problem(
        random_diagonal(d, mu_g, l_g, seed)?,
        Regularizer::l1(lambda)?,
    )
}

/// Random diagonal quadratic plus an MCP penalty; needs `μ_g > 1/γ`.
pub fn quadratic_mcp(
    d: usize,
    mu_g: f64,
    l_g: f64,
    mcp: McpParams,
    seed: u64,
) -> Result<ProblemSpec> {
    separable_problem(random_diagonal(d, mu_g, l_g, seed)?, Regularizer::Mcp(mcp))
}

/// Random diagonal quadratic with `h = 0`.
pub fn pure_quadratic(d: usize, mu_g: f64, l_g: f64, seed: u64) -> Result<ProblemSpec> {
    separable_problem(random_diagonal(d, mu_g, l_g, seed)?, Regularizer::Zero)
}

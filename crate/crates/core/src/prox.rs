//! Closed-form proximal operators for the separable regularizers used by the
//! solvers: ℓ1, MCP, SCAD and box indicators.
//!
//! For a weakly convex penalty the prox subproblem
//! `argmin_u η·h(u) + ½(u − x)²` is strongly convex only while `η` stays below
//! the inverse weak-convexity modulus. Queries outside that range are rejected
//! with [`Error::IllPosedProx`] instead of returning a stationary point.

use crate::error::{check_dim, Error, Result};
use crate::linalg::compensated_sum;
use crate::problem::ProxOracle;

/// Parameters of the minimax concave penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McpParams {
    lambda: f64,
    gamma: f64,
}

impl McpParams {
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "MCP lambda must be > 0, got {lambda}"
            )));
        }
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "MCP gamma must be > 1, got {gamma}"
            )));
        }
        Ok(Self { lambda, gamma })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// μ_h = −1/γ.
    pub fn strong_convexity(&self) -> f64 {
        -1.0 / self.gamma
    }
}

/// Parameters of the smoothly clipped absolute deviation penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScadParams {
    lambda: f64,
    a: f64,
}

impl ScadParams {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "SCAD lambda must be > 0, got {lambda}"
            )));
        }
        if !(a > 2.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "SCAD a must be > 2, got {a}"
            )));
        }
        Ok(Self { lambda, a })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// μ_h = −1/(a − 1).
    pub fn strong_convexity(&self) -> f64 {
        -1.0 / (self.a - 1.0)
    }
}

pub fn mcp_value(x: f64, p: McpParams) -> f64 {
    let ax = x.abs();
    if ax <= p.gamma * p.lambda {
        p.lambda * ax - x * x / (2.0 * p.gamma)
    } else {
        0.5 * p.gamma * p.lambda * p.lambda
    }
}

pub fn scad_value(x: f64, p: ScadParams) -> f64 {
    let ax = x.abs();
    let (l, a) = (p.lambda, p.a);
    if ax <= l {
        l * ax
    } else if ax <= a * l {
        (-x * x + 2.0 * a * l * ax - l * l) / (2.0 * (a - 1.0))
    } else {
        0.5 * (a + 1.0) * l * l
    }
}

/// `sign(x)·max(|x| − t, 0)`.
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    let ax = x.abs();
    if ax <= t {
        0.0
    } else {
        x.signum() * (ax - t)
    }
}

/// Firm thresholding: the minimizer of `η·MCP(u) + ½(u − x)²`.
pub fn prox_mcp_scalar(x: f64, eta: f64, p: McpParams) -> Result<f64> {
    check_step(eta)?;
    if eta >= p.gamma {
        return Err(Error::IllPosedProx {
            eta,
            limit: p.gamma,
        });
    }
    let ax = x.abs();
    let out = if ax <= eta * p.lambda {
        0.0
    } else if ax <= p.gamma * p.lambda {
        x.signum() * (ax - eta * p.lambda) / (1.0 - eta / p.gamma)
    } else {
        x
    };
    Ok(out)
}

/// Minimizer of `η·SCAD(u) + ½(u − x)²`.
pub fn prox_scad_scalar(x: f64, eta: f64, p: ScadParams) -> Result<f64> {
    check_step(eta)?;
    let limit = p.a - 1.0;
    if eta >= limit {
        return Err(Error::IllPosedProx { eta, limit });
    }
    let ax = x.abs();
    let (l, a) = (p.lambda, p.a);
    let out = if ax <= l * (1.0 + eta) {
        soft_threshold(x, eta * l)
    } else if ax <= a * l {
        x.signum() * ((a - 1.0) * ax - eta * a * l) / (a - 1.0 - eta)
    } else {
        x
    };
    Ok(out)
}

pub fn prox_l1(x: &[f64], eta: f64, lambda: f64) -> Result<Vec<f64>> {
    check_step(eta)?;
    Ok(x.iter()
        .map(|&xi| soft_threshold(xi, eta * lambda))
        .collect())
}

pub fn prox_mcp(x: &[f64], eta: f64, p: McpParams) -> Result<Vec<f64>> {
    x.iter().map(|&xi| prox_mcp_scalar(xi, eta, p)).collect()
}

pub fn prox_scad(x: &[f64], eta: f64, p: ScadParams) -> Result<Vec<f64>> {
    x.iter().map(|&xi| prox_scad_scalar(xi, eta, p)).collect()
}

/// Projection onto `[lo, hi]`; the step is irrelevant for an indicator.
pub fn prox_box(x: &[f64], _eta: f64, lo: &[f64], hi: &[f64]) -> Result<Vec<f64>> {
    check_dim(x.len(), lo.len())?;
    check_dim(x.len(), hi.len())?;
    check_box(lo, hi)?;
    Ok(x.iter()
        .zip(lo.iter().zip(hi))
        .map(|(&xi, (&l, &h))| xi.clamp(l, h))
        .collect())
}

fn check_step(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "prox step must be positive, got {eta}"
        )));
    }
    Ok(())
}

fn check_box(lo: &[f64], hi: &[f64]) -> Result<()> {
    if let Some(i) = lo.iter().zip(hi).position(|(l, h)| !(l <= h)) {
        return Err(Error::InvalidArgument(format!(
            "box bounds inverted at coordinate {i}: {} > {}",
            lo[i], hi[i]
        )));
    }
    Ok(())
}

/// A coordinate-separable penalty `h(x) = Σ φ(xᵢ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularizer {
    Zero,
    L1 { lambda: f64 },
    Mcp(McpParams),
    Scad(ScadParams),
}

impl Regularizer {
    pub fn l1(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "l1 weight must be > 0, got {lambda}"
            )));
        }
        Ok(Regularizer::L1 { lambda })
    }

    pub fn scalar_value(&self, x: f64) -> f64 {
        match *self {
            Regularizer::Zero => 0.0,
            Regularizer::L1 { lambda } => lambda * x.abs(),
            Regularizer::Mcp(p) => mcp_value(x, p),
            Regularizer::Scad(p) => scad_value(x, p),
        }
    }

    pub fn scalar_prox(&self, x: f64, eta: f64) -> Result<f64> {
        match *self {
            Regularizer::Zero => {
                check_step(eta)?;
                Ok(x)
            }
            Regularizer::L1 { lambda } => {
                check_step(eta)?;
                Ok(soft_threshold(x, eta * lambda))
            }
            Regularizer::Mcp(p) => prox_mcp_scalar(x, eta, p),
            Regularizer::Scad(p) => prox_scad_scalar(x, eta, p),
        }
    }

    /// Weak-convexity modulus as a (possibly negative) strong convexity constant.
    pub fn strong_convexity(&self) -> f64 {
        match *self {
            Regularizer::Zero | Regularizer::L1 { .. } => 0.0,
            Regularizer::Mcp(p) => p.strong_convexity(),
            Regularizer::Scad(p) => p.strong_convexity(),
        }
    }

    /// `φ(x) − φ(y)` as the integral of `φ'` from `|y|` to `|x|`, so nearby
    /// arguments do not cancel.
    pub fn scalar_value_difference(&self, x: f64, y: f64) -> f64 {
        let (sx, sy) = (x.abs(), y.abs());
        match *self {
            Regularizer::Zero => 0.0,
            Regularizer::L1 { lambda } => lambda * (sx - sy),
            Regularizer::Mcp(p) => {
                let cap = p.gamma * p.lambda;
                let (u, v) = (sx.min(cap), sy.min(cap));
                (u - v) * (p.lambda - (u + v) / (2.0 * p.gamma))
            }
            Regularizer::Scad(p) => {
                let (l, a) = (p.lambda, p.a);
                let linear = l * (sx.min(l) - sy.min(l));
                let (u, v) = (sx.clamp(l, a * l), sy.clamp(l, a * l));
                linear + (u - v) * (a * l - (u + v) / 2.0) / (a - 1.0)
            }
        }
    }
}

impl ProxOracle for Regularizer {
    fn value(&self, x: &[f64]) -> f64 {
        match self {
            Regularizer::Zero => 0.0,
            _ => compensated_sum(x.iter().map(|&xi| self.scalar_value(xi))),
        }
    }

    fn value_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Regularizer::Zero => 0.0,
            _ => compensated_sum(
                x.iter()
                    .zip(y)
                    .map(|(&xi, &yi)| self.scalar_value_difference(xi, yi)),
            ),
        }
    }

    fn prox_into(&self, x: &[f64], eta: f64, out: &mut [f64]) -> Result<()> {
        check_dim(x.len(), out.len())?;
        check_step(eta)?;
        // Validate once so every coordinate sees the same well-posedness answer.
        let limit = -1.0 / self.strong_convexity();
        if self.strong_convexity() < 0.0 && eta >= limit {
            return Err(Error::IllPosedProx { eta, limit });
        }
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = self.scalar_prox(xi, eta)?;
        }
        Ok(())
    }

    fn strong_convexity(&self) -> f64 {
        Regularizer::strong_convexity(self)
    }

    fn is_zero(&self) -> bool {
        matches!(self, Regularizer::Zero)
    }
}

/// Indicator of the box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxIndicator {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxIndicator {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        check_box(&lo, &hi)?;
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&l, &h))| l <= xi && xi <= h)
    }
}

impl ProxOracle for BoxIndicator {
    fn value(&self, x: &[f64]) -> f64 {
        if x.len() == self.lo.len() && self.contains(x) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox_into(&self, x: &[f64], eta: f64, out: &mut [f64]) -> Result<()> {
        check_dim(self.lo.len(), x.len())?;
        check_dim(x.len(), out.len())?;
        check_step(eta)?;
        for (i, o) in out.iter_mut().enumerate() {
            *o = x[i].clamp(self.lo[i], self.hi[i]);
        }
        Ok(())
    }

    fn strong_convexity(&self) -> f64 {
        0.0
    }
}

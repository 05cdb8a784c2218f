//! The continuous-time model behind the accelerated scheme:
//!
//! ```text
//! ẋ = 2√μ̃ coth(√μ̃ t)(v − x)
//! v̇ = (tanh(√μ̃ t)/√μ̃)(μ̃(x − v) − ∇f(x)),    x(0) = v(0) = x₀
//! ```
//!
//! integrated with fixed-step RK4, together with its energy
//!
//! ```text
//! E(t) = (sinh²(√μ̃ t)/μ̃)(f(x) − f* − (μ̃/2)‖x − x*‖²) + cosh²(√μ̃ t)‖v − x*‖².
//! ```
//!
//! Only smooth objectives (`h = 0`) are supported.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{all_finite, dist_sq};
use crate::problem::{ProblemSpec, SmoothOracle};

/// Below this `μ̃` the `μ̃ → 0` limits of the coefficients are used.
pub const MU_TILDE_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OdeState {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

impl OdeState {
    pub fn initial(x0: Vec<f64>) -> Self {
        Self {
            t: 0.0,
            v: x0.clone(),
            x: x0,
        }
    }
}

/// Coefficients `(2√μ̃ coth(√μ̃ t), tanh(√μ̃ t)/√μ̃)`.
fn coefficients(t: f64, mu_tilde: f64) -> (f64, f64) {
    if mu_tilde < MU_TILDE_LIMIT {
        return (2.0 / t, t);
    }
    let r = mu_tilde.sqrt();
    let th = (r * t).tanh();
    (2.0 * r / th, th / r)
}

/// Right-hand side of the first-order system at `s`.
pub fn item_rhs(s: &OdeState, mu_tilde: f64, g: &dyn SmoothOracle) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(s.t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ODE right-hand side needs t > 0, got {}",
            s.t
        )));
    }
    if !(mu_tilde >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mu_tilde must be >= 0, got {mu_tilde}"
        )));
    }
    check_dim(s.x.len(), s.v.len())?;
    let (cx, cv) = coefficients(s.t, mu_tilde);
    let grad = g.gradient(&s.x);
    let m = if mu_tilde < MU_TILDE_LIMIT {
        0.0
    } else {
        mu_tilde
    };
    let dx = s.x.iter().zip(&s.v).map(|(x, v)| cx * (v - x)).collect();
    let dv = (0..s.x.len())
        .map(|i| cv * (m * (s.x[i] - s.v[i]) - grad[i]))
        .collect();
    Ok((dx, dv))
}

/// `E(t)`; for `μ̃ → 0` this is `t²(f(x) − f*) + ‖v − x*‖²`.
pub fn lyapunov_continuous(s: &OdeState, p: &ProblemSpec, mu_tilde: f64) -> Result<f64> {
    let opt = p.optimum().ok_or(Error::MissingOptimum)?;
    check_dim(p.dimension(), s.v.len())?;
    let gap = p.gap(&s.x)?;
    let dv = dist_sq(&s.v, &opt.x_star);
    if mu_tilde < MU_TILDE_LIMIT {
        return Ok(s.t * s.t * gap + dv);
    }
    let arg = mu_tilde.sqrt() * s.t;
    let (sh, ch) = (arg.sinh(), arg.cosh());
    let dx = dist_sq(&s.x, &opt.x_star);
    Ok(sh * sh / mu_tilde * (gap - 0.5 * mu_tilde * dx) + ch * ch * dv)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSample {
    pub state: OdeState,
    /// `E(t)`, present when the optimum is known.
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub mu_tilde: f64,
    pub step: f64,
    /// Samples at `t = 0, h, 2h, …, t_end`.
    pub samples: Vec<OdeSample>,
}

impl Trajectory {
    pub fn last(&self) -> &OdeSample {
        self.samples
            .last()
            .expect("trajectory always holds the initial sample")
    }
}

fn validate(p: &ProblemSpec, mu_tilde: f64) -> Result<()> {
    if !p.nonsmooth.is_zero() {
        return Err(Error::InvalidArgument("the ODE model needs h = 0".into()));
    }
    if !(mu_tilde >= 0.0 && mu_tilde <= p.mu() * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "mu_tilde must lie in [0, mu = {}], got {mu_tilde}",
            p.mu()
        )));
    }
    Ok(())
}

fn sample(p: &ProblemSpec, state: OdeState, mu_tilde: f64) -> Result<OdeSample> {
    let energy = match p.optimum() {
        Some(_) => Some(lyapunov_continuous(&state, p, mu_tilde)?),
        None => None,
    };
    Ok(OdeSample { state, energy })
}

fn axpy(x: &[f64], a: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(x, d)| x + a * d).collect()
}

/// One classical RK4 step of size `h` from `s` (`s.t > 0`).
pub fn rk4_step(s: &OdeState, h: f64, mu_tilde: f64, g: &dyn SmoothOracle) -> Result<OdeState> {
    let stage = |t: f64, x: Vec<f64>, v: Vec<f64>| item_rhs(&OdeState { t, x, v }, mu_tilde, g);
    let (k1x, k1v) = item_rhs(s, mu_tilde, g)?;
    let (k2x, k2v) = stage(
        s.t + 0.5 * h,
        axpy(&s.x, 0.5 * h, &k1x),
        axpy(&s.v, 0.5 * h, &k1v),
    )?;
    let (k3x, k3v) = stage(
        s.t + 0.5 * h,
        axpy(&s.x, 0.5 * h, &k2x),
        axpy(&s.v, 0.5 * h, &k2v),
    )?;
    let (k4x, k4v) = stage(s.t + h, axpy(&s.x, h, &k3x), axpy(&s.v, h, &k3v))?;
    let comb = |y: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..y.len())
            .map(|i| y[i] + h / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
            .collect()
    };
    let x = comb(&s.x, &k1x, &k2x, &k3x, &k4x);
    let v = comb(&s.v, &k1v, &k2v, &k3v, &k4v);
    if !all_finite(&x) || !all_finite(&v) {
        return Err(Error::Divergence);
    }
    Ok(OdeState { t: s.t + h, x, v })
}

/// Integrates from `t = 0` to `t_end` in `steps` equal steps.
///
/// The first step uses the expansion `x(t) ≈ x₀ − (t²/4)∇f(x₀)`,
/// `v(t) ≈ x₀ − (t²/2)∇f(x₀)` (exact up to `O(t⁴)`), which avoids the
/// `coth` singularity at the origin.
pub fn integrate(
    p: &ProblemSpec,
    mu_tilde: f64,
    t_end: f64,
    steps: usize,
    x0: Vec<f64>,
) -> Result<Trajectory> {
    validate(p, mu_tilde)?;
    check_dim(p.dimension(), x0.len())?;
    if !(t_end > 0.0 && t_end.is_finite()) || steps == 0 {
        return Err(Error::InvalidArgument(
            "need t_end > 0 and steps >= 1".into(),
        ));
    }
    let h = t_end / steps as f64;
    let g = p.smooth.as_ref();
    let grad0 = g.gradient(&x0);
    let start = OdeState {
        t: h,
        x: axpy(&x0, -0.25 * h * h, &grad0),
        v: axpy(&x0, -0.5 * h * h, &grad0),
    };
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(sample(p, OdeState::initial(x0), mu_tilde)?);
    let mut state = start;
    for i in 1..steps {
        let next = rk4_step(&state, h, mu_tilde, g)?;
        samples.push(sample(p, std::mem::replace(&mut state, next), mu_tilde)?);
        // Keep t on the grid rather than accumulating rounding.
        state.t = (i + 1) as f64 * h;
    }
    samples.push(sample(p, state, mu_tilde)?);
    Ok(Trajectory {
        mu_tilde,
        step: h,
        samples,
    })
}

/// RK4 from an interior state `s` (`s.t > 0`) up to `t_end`.
pub fn integrate_from(
    p: &ProblemSpec,
    mu_tilde: f64,
    s: OdeState,
    t_end: f64,
    steps: usize,
) -> Result<OdeState> {
    validate(p, mu_tilde)?;
    if !(t_end > s.t) || steps == 0 {
        return Err(Error::InvalidArgument(
            "need t_end > t and steps >= 1".into(),
        ));
    }
    let h = (t_end - s.t) / steps as f64;
    let mut state = s;
    for _ in 0..steps {
        state = rk4_step(&state, h, mu_tilde, p.smooth.as_ref())?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::prox::Regularizer;
    use crate::smooth::DiagonalQuadratic;

    fn quadratic(w: f64) -> ProblemSpec {
        let g = Arc::new(DiagonalQuadratic::new(vec![w], vec![0.0]).unwrap());
        ProblemSpec::new(g, Arc::new(Regularizer::Zero), 1)
            .unwrap()
            .with_optimum(vec![0.0])
            .unwrap()
    }

    #[test]
    fn rhs_example() {
        let p = quadratic(1.0);
        let s = OdeState {
            t: 1.0,
            x: vec![2.0],
            v: vec![0.0],
        };
        let (dx, dv) = item_rhs(&s, 1.0, p.smooth.as_ref()).unwrap();
        let coth = 1.0 / 1f64.tanh();
        assert!((dx[0] - 2.0 * coth * -2.0).abs() < 1e-14);
        // μ̃(x − v) = ∇f(x) here, so v does not move.
        assert_eq!(dv[0], 0.0);
        let s = OdeState {
            t: 1.0,
            x: vec![2.0],
            v: vec![1.0],
        };
        let (dx, dv) = item_rhs(&s, 1.0, p.smooth.as_ref()).unwrap();
        assert!((dx[0] + 2.0 * coth).abs() < 1e-14);
        assert!((dv[0] + 1f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn rhs_rejects_origin() {
        let p = quadratic(1.0);
        assert!(item_rhs(&OdeState::initial(vec![1.0]), 1.0, p.smooth.as_ref()).is_err());
    }

    #[test]
    fn rhs_limit_coefficients() {
        let p = quadratic(1.0);
        let s = OdeState {
            t: 2.0,
            x: vec![1.0],
            v: vec![3.0],
        };
        let (dx, dv) = item_rhs(&s, 0.0, p.smooth.as_ref()).unwrap();
        assert_eq!(dx[0], 2.0 / 2.0 * 2.0);
        assert_eq!(dv[0], -2.0);
        // The exact coefficients approach the limit continuously.
        let (dx2, dv2) = item_rhs(&s, 1e-10, p.smooth.as_ref()).unwrap();
        assert!((dx2[0] - dx[0]).abs() < 1e-8);
        assert!((dv2[0] - dv[0]).abs() < 1e-8);
    }

    #[test]
    fn energy_at_start_and_optimum() {
        let p = quadratic(2.0);
        assert_eq!(
            lyapunov_continuous(&OdeState::initial(vec![3.0]), &p, 1.0).unwrap(),
            9.0
        );
        let s = OdeState {
            t: 4.0,
            x: vec![0.0],
            v: vec![0.0],
        };
        assert_eq!(lyapunov_continuous(&s, &p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn equilibrium_stays_put() {
        let p = quadratic(1.0);
        let tr = integrate(&p, 0.5, 5.0, 100, vec![0.0]).unwrap();
        assert_eq!(tr.samples.len(), 101);
        assert!(tr
            .samples
            .iter()
            .all(|s| s.state.x[0] == 0.0 && s.state.v[0] == 0.0));
        assert!((tr.last().state.t - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonsmooth_and_large_mu_tilde() {
        let g = Arc::new(DiagonalQuadratic::new(vec![1.0], vec![0.0]).unwrap());
        let p = ProblemSpec::new(g, Arc::new(Regularizer::l1(1.0).unwrap()), 1).unwrap();
        assert!(integrate(&p, 0.5, 1.0, 10, vec![1.0]).is_err());
        assert!(integrate(&quadratic(1.0), 2.0, 1.0, 10, vec![1.0]).is_err());
    }

    #[test]
    fn energy_nonincreasing_on_quadratic() {
        let p = quadratic(1.0);
        let tr = integrate(&p, 0.5, 10.0, 10_000, vec![1.0]).unwrap();
        let e0 = tr.samples[0].energy.unwrap();
        for w in tr.samples.windows(2) {
            assert!(w[1].energy.unwrap() <= w[0].energy.unwrap() + 1e-7 * e0);
        }
        assert!(p.gap(&tr.last().state.x).unwrap() < 1e-3);
    }

    #[test]
    fn divergence_reported() {
        // A step far past the stability limit of RK4.
        let p = quadratic(1e6);
        let err = integrate(&p, 0.0, 1e4, 200, vec![1.0]);
        assert!(matches!(err, Err(Error::Divergence)));
    }
}

//! Step-size schedule of the accelerated method.
//!
//! The schedule is driven by the scalar sequence `A_k` (with `A_0 = 0`), which
//! is advanced by taking the larger root of
//!
//! ```text
//! (α − β)(A⁺ − A)² − 2(1 + mA)A⁺ = 0,    m = β + γ,
//! ```
//!
//! so the Lyapunov decrement condition holds with equality. The gap bound of
//! the method decays like `1/A_k`, so `A_k` growth is the convergence rate.
//! Everything here works with `A_k` directly; the hyperbolic time
//! parametrization only appears in the ODE module.

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// Which strong convexity parameter feeds `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaMode {
    /// `β = μ_g − μ²/(4L_g)`; yields a bound on `f(x_k) − f*` itself.
    #[default]
    Compromised,
    /// `β = μ_g`.
    Plain,
}

impl std::str::FromStr for BetaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compromised" => Ok(BetaMode::Compromised),
            "plain" => Ok(BetaMode::Plain),
            other => Err(Error::InvalidArgument(format!(
                "unknown beta mode '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for BetaMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BetaMode::Compromised => "compromised",
            BetaMode::Plain => "plain",
        })
    }
}

/// The triple `(α, β, γ)` and `m = β + γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    m: f64,
}

/// Slack on `m ≥ 0` for roundoff in `μ_g − μ²/(4L) + μ_h`.
const M_FLOOR: f64 = -1e-12;

impl ScheduleParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !beta.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidArgument(
                "beta and gamma must be finite".into(),
            ));
        }
        if !(alpha > beta) {
            return Err(Error::InvalidArgument(format!(
                "schedule needs alpha > beta, got alpha = {alpha}, beta = {beta}"
            )));
        }
        let m = beta + gamma;
        if m < M_FLOOR {
            return Err(Error::InvalidArgument(format!(
                "beta + gamma = {m} is negative"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            m: m.max(0.0),
        })
    }

    /// `(α, β, γ) = (L, β(mode), μ_h)`.
    pub fn from_constants(lipschitz: f64, mu_g: f64, mu_h: f64, mode: BetaMode) -> Result<Self> {
        let mu = mu_g + mu_h;
        let beta = match mode {
            BetaMode::Compromised => mu_g - mu * mu / (4.0 * lipschitz),
            BetaMode::Plain => mu_g,
        };
        Self::new(lipschitz, beta, mu_h)
    }

    pub fn for_problem(p: &ProblemSpec, mode: BetaMode) -> Result<Self> {
        Self::from_constants(p.lipschitz(), p.mu_g(), p.mu_h(), mode)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// One schedule transition from `A`.
    pub fn step(&self, a: f64) -> Result<ScheduleState> {
        let a_next = advance_a(a, self)?;
        if !(a_next > a) {
            return Err(Error::InvariantViolation(format!(
                "schedule did not grow: A = {a}, A+ = {a_next}"
            )));
        }
        if a_next - a < 0.5 / self.alpha {
            return Err(Error::InvariantViolation(format!(
                "schedule increment {} below 1/(2 alpha)",
                a_next - a
            )));
        }
        if !(2.0 + self.m * (a + a_next) > 0.0) {
            return Err(Error::InvariantViolation(
                "prox well-definedness 2 + m(A + A+) > 0 failed".into(),
            ));
        }
        let b_next = compute_b(a, a_next, self)?;
        let eta_next = prox_step(a, a_next, b_next, self)?;
        Ok(ScheduleState {
            a,
            a_next,
            b_next,
            eta_next,
        })
    }
}

/// One transition of the schedule: `A_k`, `A_{k+1}`, `B_{k+1}`, `η_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleState {
    pub a: f64,
    pub a_next: f64,
    pub b_next: f64,
    pub eta_next: f64,
}

/// Largest `A⁺` with `(α − β)(A⁺ − A)² ≤ 2(1 + mA)A⁺`.
pub fn advance_a(a: f64, p: &ScheduleParams) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::InvalidArgument(format!("A must be >= 0, got {a}")));
    }
    let (alpha, beta, gamma, m) = (p.alpha, p.beta, p.gamma, p.m);
    let quad = m * (2.0 * alpha - beta + gamma);
    let lin = 2.0 * (alpha + gamma);
    let denom = alpha - beta;
    let a_next = if a <= 1.0 {
        let rad = clamp_radicand(quad * a * a + lin * a + 1.0, 1.0)?;
        ((alpha + gamma) * a + 1.0 + rad.sqrt()) / denom
    } else {
        // Factor A out so the radicand does not overflow before A itself does.
        let inv = 1.0 / a;
        let scale = quad.abs() + lin.abs() * inv + inv * inv;
        let rad = clamp_radicand(quad + lin * inv + inv * inv, scale)?;
        a * ((alpha + gamma) + inv + rad.sqrt()) / denom
    };
    if !a_next.is_finite() {
        return Err(Error::ScheduleSaturated { a });
    }
    Ok(a_next)
}

fn clamp_radicand(rad: f64, scale: f64) -> Result<f64> {
    if rad >= 0.0 {
        Ok(rad)
    } else if rad >= -1e-14 * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::Numeric(format!(
            "negative schedule discriminant {rad}"
        )))
    }
}

/// `B_{k+1} = A⁺/(A⁺ − A) + (βA⁺ + γA)/(2(1 + mA))`.
pub fn compute_b(a: f64, a_next: f64, p: &ScheduleParams) -> Result<f64> {
    if !(a_next > a) {
        return Err(Error::InvalidArgument(format!(
            "need A+ > A, got {a_next} <= {a}"
        )));
    }
    let one_ma = 1.0 + p.m * a;
    if !(one_ma > 0.0) {
        return Err(Error::InvalidArgument("need 1 + mA > 0".into()));
    }
    let b = a_next / (a_next - a) + (p.beta * a_next + p.gamma * a) / (2.0 * one_ma);
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Numeric(format!("B = {b} is not positive")));
    }
    Ok(b)
}

/// Prox step `η = (A⁺ − A)/(2(1 + mA)B⁺)`; checked against `−1/γ` when `γ < 0`.
pub fn prox_step(a: f64, a_next: f64, b_next: f64, p: &ScheduleParams) -> Result<f64> {
    let eta = (a_next - a) / (2.0 * (1.0 + p.m * a) * b_next);
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::Numeric(format!("prox step {eta} is not positive")));
    }
    if p.gamma < 0.0 && eta >= -1.0 / p.gamma {
        return Err(Error::InvariantViolation(format!(
            "prox step {eta} reaches the weak-convexity limit {}",
            -1.0 / p.gamma
        )));
    }
    Ok(eta)
}

/// `(α − β)(A⁺ − A)² − 2(1 + mA)A⁺`; non-positive for admissible steps.
pub fn schedule_residual(a: f64, a_next: f64, p: &ScheduleParams) -> f64 {
    let d = a_next - a;
    (p.alpha - p.beta) * d * d - 2.0 * (1.0 + p.m * a) * a_next
}

/// Residual scaled by `max(1, (α − β)A⁺²)`.
///
/// Large `A⁺` is handled by dividing through by `A⁺²` first, so the value
/// stays finite after `A⁺²` leaves the `f64` range.
pub fn relative_residual(a: f64, a_next: f64, p: &ScheduleParams) -> f64 {
    if a_next <= 1.0 {
        return schedule_residual(a, a_next, p) / ((p.alpha - p.beta) * a_next * a_next).max(1.0);
    }
    let d = (a_next - a) / a_next;
    let inv = 1.0 / a_next;
    let scaled = (p.alpha - p.beta) * d * d - 2.0 * (inv + p.m * (a * inv));
    scaled / (p.alpha - p.beta).max(inv * inv)
}

/// Guaranteed growth of the schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBounds {
    /// `k²/(2α)`, a lower bound on `A_k`.
    pub sublinear: f64,
    /// `ρ` with `A_{k+1} ≥ ρ A_k`.
    pub linear_ratio: f64,
}

pub fn rate_lower_bounds(p: &ScheduleParams, k: usize) -> RateBounds {
    let kf = k as f64;
    let q1 = p.beta / p.alpha;
    let q2 = p.gamma / p.alpha;
    let rad = ((q1 + q2) * (2.0 - q1 + q2)).max(0.0);
    RateBounds {
        sublinear: kf * kf / (2.0 * p.alpha),
        linear_ratio: (1.0 + q2 + rad.sqrt()) / (1.0 - q1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_block_params(mode: BetaMode) -> ScheduleParams {
        ScheduleParams::from_constants(5000.0, 1.0, -1.0 / 3.0, mode).unwrap()
    }

    #[test]
    fn first_step_is_two_over_gap() {
        let p = ScheduleParams::new(4.0, 1.0, 0.5).unwrap();
        assert_eq!(advance_a(0.0, &p).unwrap(), 2.0 / 3.0);
        let p = two_block_params(BetaMode::Compromised);
        let a1 = advance_a(0.0, &p).unwrap();
        assert_eq!(a1, 2.0 / (p.alpha() - p.beta()));
        assert!(relative_residual(0.0, a1, &p).abs() <= 1e-12);
    }

    #[test]
    fn relative_residual_survives_huge_steps() {
        let p = ScheduleParams::new(0.5, 0.42, 0.0).unwrap();
        let (a, a_next) = (3.0, 40.0);
        let direct = schedule_residual(a, a_next, &p) / ((p.alpha - p.beta) * a_next * a_next);
        assert!((relative_residual(a, a_next, &p) - direct).abs() < 1e-15);
        let r = relative_residual(1e170, 1.3e171, &p);
        assert!(r.is_finite());
        let (a, a_next) = (1e170, advance_a(1e170, &p).unwrap());
        assert!(relative_residual(a, a_next, &p).abs() < 1e-12);
    }

    #[test]
    fn unit_alpha_from_two() {
        let p = ScheduleParams::new(1.0, 0.0, 0.0).unwrap();
        let a = advance_a(2.0, &p).unwrap();
        assert!((a - (3.0 + 5f64.sqrt())).abs() < 1e-14);
        assert!(schedule_residual(2.0, a, &p).abs() < 1e-13);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ScheduleParams::new(1.0, 1.0, 0.0).is_err());
        assert!(ScheduleParams::new(0.0, -1.0, 0.0).is_err());
        assert!(ScheduleParams::new(1.0, 0.0, -0.5).is_err());
        assert!(advance_a(-1.0, &ScheduleParams::new(1.0, 0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn b_without_curvature_terms() {
        let p = ScheduleParams::new(3.0, 0.0, 0.0).unwrap();
        assert_eq!(compute_b(1.0, 3.0, &p).unwrap(), 1.5);
        // A = 0: B = 1 + βA⁺/2
        let p = ScheduleParams::new(3.0, 0.5, -0.25).unwrap();
        assert!((compute_b(0.0, 2.0, &p).unwrap() - 1.5).abs() < 1e-15);
        assert!(compute_b(2.0, 2.0, &p).is_err());
    }

    #[test]
    fn first_prox_step_is_inverse_lipschitz() {
        let p = ScheduleParams::new(8.0, 0.0, 0.0).unwrap();
        let s = p.step(0.0).unwrap();
        assert_eq!(s.b_next, 1.0);
        assert_eq!(s.eta_next, 1.0 / 8.0);
        // m = 0 in general: η = ΔA/(2B)
        let eta = prox_step(1.0, 2.0, 4.0, &p).unwrap();
        assert_eq!(eta, 1.0 / 8.0);
    }

    #[test]
    fn two_block_first_prox_step_is_admissible() {
        let p = two_block_params(BetaMode::Compromised);
        let s = p.step(0.0).unwrap();
        assert!(s.eta_next > 0.0 && s.eta_next < 3.0);
    }

    #[test]
    fn prox_step_limit_is_enforced() {
        let p = ScheduleParams::new(1.0, 0.9, -0.5).unwrap();
        assert!(matches!(
            prox_step(0.0, 1.0, 0.1, &p),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn saturation_is_reported() {
        let p = ScheduleParams::new(1.0, 0.5, 0.4).unwrap();
        assert!(matches!(
            advance_a(1e308, &p),
            Err(Error::ScheduleSaturated { .. })
        ));
    }

    #[test]
    fn rate_without_curvature_is_one() {
        let p = ScheduleParams::new(7.0, 0.0, 0.0).unwrap();
        let r = rate_lower_bounds(&p, 4);
        assert_eq!(r.linear_ratio, 1.0);
        assert_eq!(r.sublinear, 16.0 / 14.0);
    }

    #[test]
    fn rate_beats_previous_bound() {
        for q in [0.01, 0.1, 0.5, 1.0] {
            let p = ScheduleParams {
                alpha: 1.0,
                beta: q,
                gamma: 0.0,
                m: q,
            };
            let rho = rate_lower_bounds(&p, 1).linear_ratio;
            assert!(rho > 1.0 + (2.0 * q).sqrt() + q, "q = {q}, rho = {rho}");
        }
    }

    #[test]
    fn two_block_ratios_dominate_rho() {
        let p = two_block_params(BetaMode::Compromised);
        let rho = rate_lower_bounds(&p, 0).linear_ratio;
        let mut a = advance_a(0.0, &p).unwrap();
        for _ in 0..1000 {
            let next = advance_a(a, &p).unwrap();
            assert!(next / a >= rho - 1e-12);
            a = next;
        }
    }

    #[test]
    fn balanced_curvature_matches_flat_recurrence() {
        // β = −γ ≠ 0 kills the quadratic radicand term.
        let p = ScheduleParams::new(2.0, 0.5, -0.5).unwrap();
        let (alpha, beta, gamma) = (2.0_f64, 0.5_f64, -0.5_f64);
        let mut a = 0.0;
        for _ in 0..200 {
            let closed = ((alpha + gamma) * a + 1.0 + (2.0 * (alpha + gamma) * a + 1.0).sqrt())
                / (alpha - beta);
            let next = advance_a(a, &p).unwrap();
            assert!(next.is_finite());
            assert!((next - closed).abs() <= 1e-14 * closed);
            a = next;
        }
    }

    #[test]
    fn beta_mode_parsing() {
        assert_eq!("plain".parse::<BetaMode>().unwrap(), BetaMode::Plain);
        assert_eq!(
            "compromised".parse::<BetaMode>().unwrap(),
            BetaMode::Compromised
        );
        assert!("other".parse::<BetaMode>().is_err());
    }
}

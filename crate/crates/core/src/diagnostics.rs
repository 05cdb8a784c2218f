//! Post-hoc certificate checkers.
//!
//! Each checker evaluates one of the inequalities that the convergence
//! analysis relies on and reports the worst (scaled) violation. Checkers are
//! pure observers: they never change or stop a solver run.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist_sq, dot, norm_inf, sub};
use crate::problem::ProblemSpec;
use crate::schedule::{relative_residual, ScheduleParams};

/// Relative slack for the weak discrete gradient inequality.
pub const WDG_TOLERANCE: f64 = 1e-9;
/// Relative slack for the schedule condition, scaled by `max(1, (α − β)A⁺²)`.
pub const SCHEDULE_TOLERANCE: f64 = 1e-9;
/// Relative slack for Lyapunov monotonicity, scaled by `max(1, E_0)`.
pub const LYAPUNOV_TOLERANCE: f64 = 1e-9;

/// Where the worst violation of a certificate occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Iteration(usize),
    Parameter(f64),
    Sample(usize),
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::Iteration(k) => write!(f, "k={k}"),
            Location::Parameter(q) => write!(f, "q={q:e}"),
            Location::Sample(i) => write!(f, "sample={i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub location: Option<Location>,
}

impl Certificate {
    /// `passed ⇔ worst_violation ≤ tolerance` (NaN fails).
    pub fn new(
        name: impl Into<String>,
        worst_violation: f64,
        tolerance: f64,
        location: Option<Location>,
    ) -> Self {
        Self {
            name: name.into(),
            passed: worst_violation <= tolerance,
            worst_violation,
            tolerance,
            location,
        }
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: worst violation {:e} (tolerance {:e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst_violation,
            self.tolerance
        )?;
        if let Some(loc) = self.location {
            write!(f, " at {loc}")?;
        }
        Ok(())
    }
}

/// Tracks the maximum of a stream of violations and where it happened.
#[derive(Debug, Clone, Copy)]
struct Worst {
    value: f64,
    at: Option<Location>,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            at: None,
        }
    }

    fn push(&mut self, v: f64, at: Location) {
        if v > self.value || v.is_nan() && !self.value.is_nan() {
            self.value = v;
            self.at = Some(at);
        }
    }
}

/// Discrete Lyapunov value
/// `E = A(f(x) − f* − (m/2)‖x − x*‖²) + (1 + mA)‖v − x*‖²`, `m = β + γ`.
pub fn lyapunov_discrete(
    x: &[f64],
    v: &[f64],
    a: f64,
    p: &ProblemSpec,
    sp: &ScheduleParams,
) -> Result<f64> {
    check_dim(p.dimension(), v.len())?;
    let opt = p.optimum().ok_or(Error::MissingOptimum)?;
    let m = sp.m();
    let v_term = (1.0 + m * a) * dist_sq(v, &opt.x_star);
    if a == 0.0 {
        check_dim(p.dimension(), x.len())?;
        return Ok(v_term);
    }
    let gap = p.gap(x)?;
    Ok(a * (gap - 0.5 * m * dist_sq(x, &opt.x_star)) + v_term)
}

/// How far `E` can move when `x`, `v` and `x*` are each displaced by a few
/// units in the last place: `σ = 4ε√d·max(1, ‖x*‖_∞)` in norm, giving
///
/// ```text
/// (1 + |m|A)(2‖v − x*‖σ + σ²) + (A/2)(L_g + |μ_h| + |m|)(2‖x − x*‖σ + σ²)
/// ```
///
/// Once iterates stall at rounding distance from `x*`, changes of `E` below
/// this bound carry no information.
pub fn lyapunov_resolution(
    x: &[f64],
    v: &[f64],
    a: f64,
    p: &ProblemSpec,
    sp: &ScheduleParams,
) -> Result<f64> {
    check_dim(p.dimension(), x.len())?;
    check_dim(p.dimension(), v.len())?;
    let opt = p.optimum().ok_or(Error::MissingOptimum)?;
    let d = p.dimension() as f64;
    let sigma = 4.0 * f64::EPSILON * d.sqrt() * norm_inf(&opt.x_star).max(1.0);
    let m = sp.m().abs();
    let dv = dist_sq(v, &opt.x_star).sqrt();
    let dx = dist_sq(x, &opt.x_star).sqrt();
    let curvature = p.lipschitz() + p.mu_h().abs() + m;
    Ok((1.0 + m * a) * (2.0 * dv + sigma) * sigma
        + 0.5 * a * curvature * (2.0 * dx + sigma) * sigma)
}

/// Checks the weak discrete gradient inequality of `∇g(z) + u`, `u ∈ ∂h(y)`:
///
/// ```text
/// f(y) − f(x) ≤ ⟨∇g(z) + u, y − x⟩ + (α/2)‖y − z‖² − (β/2)‖z − x‖² − (γ/2)‖y − x‖²
/// ```
///
/// The violation is `max(0, LHS − RHS)` divided by `max(1, Σ|terms|)`.
pub fn check_wdg(
    p: &ProblemSpec,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    u: &[f64],
    abg: &ScheduleParams,
) -> Result<Certificate> {
    let v = wdg_violation(p, x, y, z, u, abg)?;
    Ok(Certificate::new("wdg", v, WDG_TOLERANCE, None))
}

fn wdg_violation(
    p: &ProblemSpec,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    u: &[f64],
    abg: &ScheduleParams,
) -> Result<f64> {
    let d = p.dimension();
    for w in [x, y, z, u] {
        check_dim(d, w.len())?;
    }
    let lhs = p.smooth.value_difference(y, x) + p.nonsmooth.value_difference(y, x);
    let grad = p.smooth.gradient(z);
    let yx = sub(y, x);
    let inner = dot(&grad, &yx) + dot(u, &yx);
    let t_alpha = 0.5 * abg.alpha() * dist_sq(y, z);
    let t_beta = 0.5 * abg.beta() * dist_sq(z, x);
    let t_gamma = 0.5 * abg.gamma() * dist_sq(y, x);
    let rhs = inner + t_alpha - t_beta - t_gamma;
    let scale = lhs.abs() + inner.abs() + t_alpha.abs() + t_beta.abs() + t_gamma.abs();
    let excess = lhs - rhs;
    if excess.is_nan() {
        return Ok(f64::NAN);
    }
    Ok(excess.max(0.0) / scale.max(1.0))
}

/// Random-triple sampling for [`sample_wdg`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdgSampling {
    pub samples: usize,
    pub seed: u64,
    /// Points are drawn uniformly from the cube of this half-width around
    /// `x*` (or the origin when the optimum is unknown).
    pub spread: f64,
}

/// Runs [`check_wdg`] on random triples. Each `y` is produced by a prox call
/// `y = prox_{ηh}(w)` so that `u = (w − y)/η ∈ ∂h(y)`. Even samples draw `z`
/// independently; odd samples place `z` within `spread/100` of `y`, as in
/// solver steps where the new iterate lands near the gradient point.
pub fn sample_wdg(
    p: &ProblemSpec,
    abg: &ScheduleParams,
    sampling: WdgSampling,
) -> Result<Certificate> {
    let d = p.dimension();
    let center = p
        .optimum()
        .map(|o| o.x_star.clone())
        .unwrap_or_else(|| vec![0.0; d]);
    let mu_h = p.mu_h();
    let eta_cap = if mu_h < 0.0 { -1.0 / mu_h } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let s = sampling.spread;
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        center
            .iter()
            .map(|c| c + rng.random_range(-s..=s))
            .collect()
    };
    let mut worst = Worst::new();
    for i in 0..sampling.samples {
        let x = draw(&mut rng);
        let w = draw(&mut rng);
        let eta = eta_cap * rng.random_range(0.05..0.95);
        let y = p.nonsmooth.prox(&w, eta)?;
        let z: Vec<f64> = if i % 2 == 0 {
            draw(&mut rng)
        } else {
            y.iter()
                .map(|yi| yi + 1e-2 * rng.random_range(-s..=s))
                .collect()
        };
        let u: Vec<f64> = w.iter().zip(&y).map(|(wi, yi)| (wi - yi) / eta).collect();
        worst.push(wdg_violation(p, &x, &y, &z, &u, abg)?, Location::Sample(i));
    }
    Ok(Certificate::new(
        "wdg",
        worst.value.max(0.0),
        WDG_TOLERANCE,
        worst.at,
    ))
}

/// `LHS − RHS` of the rate comparison
/// `(1 + √(2q₁ − q₁²))/(1 − q₁) > 1 + √(2q) + q` with `q₁ = q − q²/4`.
pub fn rate_comparison_margin(q: f64) -> f64 {
    let q1 = q - q * q / 4.0;
    let lhs = (1.0 + (2.0 * q1 - q1 * q1).sqrt()) / (1.0 - q1);
    let rhs = 1.0 + (2.0 * q).sqrt() + q;
    lhs - rhs
}

/// Asserts the strict rate comparison on every grid point of `(0, 1]`. The
/// certificate's violation is the negated minimum margin; it passes only
/// when every margin is strictly positive.
pub fn check_rate_comparison(q_grid: &[f64]) -> Result<Certificate> {
    if let Some(q) = q_grid.iter().find(|q| !(**q > 0.0 && **q <= 1.0)) {
        return Err(Error::InvalidArgument(format!("q = {q} outside (0, 1]")));
    }
    let mut worst = Worst::new();
    for &q in q_grid {
        worst.push(-rate_comparison_margin(q), Location::Parameter(q));
    }
    Ok(Certificate::new(
        "rate_comparison",
        worst.value,
        -f64::MIN_POSITIVE,
        worst.at,
    ))
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Inequality form of the schedule condition on consecutive pairs.
pub fn check_schedule_condition(a_seq: &[f64], sp: &ScheduleParams) -> Certificate {
    let mut worst = Worst::new();
    for (k, w) in a_seq.windows(2).enumerate() {
        worst.push(relative_residual(w[0], w[1], sp), Location::Iteration(k));
    }
    let v = if a_seq.len() < 2 {
        0.0
    } else {
        worst.value.max(0.0)
    };
    Certificate::new("schedule_condition", v, SCHEDULE_TOLERANCE, worst.at)
}

/// Equality form: `|residual|` within the same scaled tolerance.
pub fn check_schedule_equality(a_seq: &[f64], sp: &ScheduleParams) -> Certificate {
    let mut worst = Worst::new();
    for (k, w) in a_seq.windows(2).enumerate() {
        worst.push(
            relative_residual(w[0], w[1], sp).abs(),
            Location::Iteration(k),
        );
    }
    let v = if a_seq.len() < 2 { 0.0 } else { worst.value };
    Certificate::new("schedule_equality", v, SCHEDULE_TOLERANCE, worst.at)
}

/// Monotone non-increase of `(k, value)` pairs, with increases scaled by
/// `max(1, |first value|)`.
pub fn check_nonincreasing(name: &str, values: &[(usize, f64)], tolerance: f64) -> Certificate {
    let scale = values.first().map(|v| v.1.abs().max(1.0)).unwrap_or(1.0);
    let mut worst = Worst::new();
    for w in values.windows(2) {
        worst.push((w[1].1 - w[0].1) / scale, Location::Iteration(w[1].0));
    }
    let v = if values.len() < 2 {
        0.0
    } else {
        worst.value.max(0.0)
    };
    Certificate::new(name, v, tolerance, worst.at)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::prox::Regularizer;
    use crate::schedule::{advance_a, schedule_residual};
    use crate::smooth::DiagonalQuadratic;

    fn quad_l1() -> ProblemSpec {
        let g = Arc::new(DiagonalQuadratic::new(vec![1.0, 4.0], vec![3.0, -2.0]).unwrap());
        let h = Regularizer::l1(1.0).unwrap();
        // x* = soft(c, λ/w) = (2, −1.75)
        ProblemSpec::new(g, Arc::new(h), 2)
            .unwrap()
            .with_optimum(vec![2.0, -1.75])
            .unwrap()
    }

    #[test]
    fn lyapunov_at_start_and_optimum() {
        let p = quad_l1();
        let sp = ScheduleParams::for_problem(&p, Default::default()).unwrap();
        let x0 = [1.0, 1.0];
        let e0 = lyapunov_discrete(&x0, &x0, 0.0, &p, &sp).unwrap();
        assert_eq!(e0, 1.0 + 2.75 * 2.75);
        let xs = [2.0, -1.75];
        assert_eq!(lyapunov_discrete(&xs, &xs, 5.0, &p, &sp).unwrap(), 0.0);
    }

    #[test]
    fn resolution_is_ulp_sized() {
        let p = quad_l1();
        let sp = ScheduleParams::new(4.0, 0.5, 0.0).unwrap();
        let x_star = [2.0, -1.75];
        // σ = 4ε√2·2
        let sigma = 8.0 * f64::EPSILON * 2f64.sqrt();
        let r = lyapunov_resolution(&x_star, &x_star, 0.0, &p, &sp).unwrap();
        assert!((r - sigma * sigma).abs() <= 1e-15 * r);
        let r1 = lyapunov_resolution(&x_star, &x_star, 1e20, &p, &sp).unwrap();
        assert!((r1 / r - (1.0 + 0.5e20 + 0.5e20 * 4.5)).abs() <= 1e-12 * (r1 / r));
        let far = lyapunov_resolution(&[3.0, 0.0], &[0.0, 0.0], 10.0, &p, &sp).unwrap();
        assert!(far < 1e-12);
    }

    #[test]
    fn lyapunov_needs_optimum() {
        let g = Arc::new(DiagonalQuadratic::new(vec![1.0], vec![0.0]).unwrap());
        let p = ProblemSpec::new(g, Arc::new(Regularizer::Zero), 1).unwrap();
        let sp = ScheduleParams::new(1.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            lyapunov_discrete(&[0.0], &[0.0], 1.0, &p, &sp),
            Err(Error::MissingOptimum)
        ));
    }

    #[test]
    fn wdg_trivial_at_coincident_points() {
        let p = quad_l1();
        let sp = ScheduleParams::new(4.0, 1.0, 0.0).unwrap();
        let x = [0.5, -0.3];
        let c = check_wdg(&p, &x, &x, &x, &[0.7, -1.0], &sp).unwrap();
        assert!(c.passed);
        assert_eq!(c.worst_violation, 0.0);
    }

    #[test]
    fn wdg_samples_pass_with_true_constants_and_fail_inflated() {
        let p = quad_l1();
        let sampling = WdgSampling {
            samples: 1000,
            seed: 3,
            spread: 5.0,
        };
        let good = ScheduleParams::new(4.0, 1.0, 0.0).unwrap();
        assert!(sample_wdg(&p, &good, sampling).unwrap().passed);
        let bad = ScheduleParams::new(4.0, 3.0, 0.0).unwrap();
        let c = sample_wdg(&p, &bad, sampling).unwrap();
        assert!(!c.passed);
        assert!(matches!(c.location, Some(Location::Sample(_))));
    }

    #[test]
    fn rate_comparison_margin_values() {
        // q = 1: LHS = 4(1 + √(15/16)), RHS = 2 + √2
        let expected = 4.0 * (1.0 + (15.0_f64 / 16.0).sqrt()) - (2.0 + 2f64.sqrt());
        assert!((rate_comparison_margin(1.0) - expected).abs() < 1e-13);
        assert!(rate_comparison_margin(1.0) > 4.0);
        let small = rate_comparison_margin(1e-6);
        assert!(small > 0.0 && small < 1e-8);
        assert!(check_rate_comparison(&[0.0]).is_err());
        assert!(check_rate_comparison(&[1.5]).is_err());
        assert!(
            check_rate_comparison(&log_grid(1e-6, 1.0, 50))
                .unwrap()
                .passed
        );
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-6, 1.0, 200);
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1e-6).abs() < 1e-20);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn schedule_certificates() {
        let sp = ScheduleParams::new(10.0, 0.5, -0.2).unwrap();
        let mut seq = vec![0.0];
        for _ in 0..1000 {
            let next = advance_a(*seq.last().unwrap(), &sp).unwrap();
            seq.push(next);
        }
        assert!(check_schedule_condition(&seq, &sp).passed);
        assert!(check_schedule_equality(&seq, &sp).passed);

        // constant A: residual −2(1 + mA)A < 0
        let flat = [3.0, 3.0];
        assert!(check_schedule_condition(&flat, &sp).passed);
        assert!(schedule_residual(3.0, 3.0, &sp) < 0.0);

        let mut inflated = seq.clone();
        inflated[500] *= 1.1;
        let c = check_schedule_condition(&inflated, &sp);
        assert!(!c.passed);
        assert_eq!(c.location, Some(Location::Iteration(499)));
    }

    #[test]
    fn nonincreasing_detects_bumps() {
        let ok = [(0, 5.0), (1, 4.0), (2, 4.0)];
        assert!(check_nonincreasing("e", &ok, 1e-9).passed);
        let bump = [(0, 5.0), (1, 4.0), (2, 4.5)];
        let c = check_nonincreasing("e", &bump, 1e-9);
        assert!(!c.passed);
        assert_eq!(c.location, Some(Location::Iteration(2)));
        assert!((c.worst_violation - 0.1).abs() < 1e-15);
    }
}

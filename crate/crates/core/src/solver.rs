//! Accelerated forward-backward iterations and the driver loop.
//!
//! One accelerated step from `(x_k, v_k, A_k)`:
//!
//! ```text
//! A⁺ from the schedule, B⁺, ΔA = A⁺ − A, c = 2(1 + mA)
//! z  = x + (ΔA/A⁺)(v − x)
//! y  = [(A/ΔA + mA/c)x + (βΔA/c)z + v − (ΔA/c)∇g(z)] / B⁺
//! x⁺ = prox_{ηh}(y),   η = ΔA/(c·B⁺)
//! v⁺ = x⁺ + (A/ΔA)(x⁺ − x)
//! ```
//!
//! Each step costs one gradient and one prox evaluation; the driver only
//! evaluates `f` at trace points.

use crate::diagnostics::lyapunov_discrete;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{all_finite, dist_sq, dot, norm_sq, sub};
use crate::problem::ProblemSpec;
use crate::schedule::{relative_residual, BetaMode, ScheduleParams, ScheduleState};

/// Backtracking gives up once the Lipschitz estimate passes this value.
pub const MAX_BACKTRACK_LIPSCHITZ: f64 = 1e15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Sr2Fista,
    Ista,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sr2fista" => Ok(Algorithm::Sr2Fista),
            "ista" => Ok(Algorithm::Ista),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Sr2Fista => "sr2fista",
            Algorithm::Ista => "ista",
        })
    }
}

/// Increase-only adaptation of `L_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backtracking {
    pub increase_factor: f64,
    pub initial_lipschitz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub beta_mode: BetaMode,
    pub max_iters: usize,
    /// Stop once `f(x_k) − f* ≤ target_gap` at a trace point.
    pub target_gap: Option<f64>,
    /// Only used by the accelerated method.
    pub backtracking: Option<Backtracking>,
    pub trace_every: usize,
    /// ISTA step; defaults to `1/L_g`.
    pub ista_step: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            beta_mode: BetaMode::Compromised,
            max_iters: 1000,
            target_gap: None,
            backtracking: None,
            trace_every: 1,
            ista_step: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trace_every == 0 {
            return Err(Error::InvalidArgument("trace_every must be >= 1".into()));
        }
        if let Some(t) = self.target_gap {
            if !(t >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "target gap must be >= 0, got {t}"
                )));
            }
        }
        if let Some(bt) = self.backtracking {
            if !(bt.increase_factor > 1.0 && bt.increase_factor.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "backtracking factor must be > 1, got {}",
                    bt.increase_factor
                )));
            }
            if !(bt.initial_lipschitz > 0.0 && bt.initial_lipschitz.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "initial L must be > 0, got {}",
                    bt.initial_lipschitz
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub k: usize,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub a: f64,
    /// Lipschitz estimate in use; equals `L_g` without backtracking.
    pub lipschitz: f64,
}

impl SolverState {
    /// `v_0 = x_0`, `A_0 = 0`.
    pub fn new(x0: Vec<f64>, lipschitz: f64) -> Self {
        Self {
            k: 0,
            v: x0.clone(),
            x: x0,
            a: 0.0,
            lipschitz,
        }
    }
}

/// An accepted accelerated step with its transient quantities.
#[derive(Debug, Clone)]
pub struct Sr2Step {
    pub state: SolverState,
    pub z: Vec<f64>,
    pub grad_z: Vec<f64>,
    /// Prox input `y_{k+1}`.
    pub y: Vec<f64>,
    pub schedule: ScheduleState,
    pub params: ScheduleParams,
}

pub fn sr2fista_step(state: &SolverState, p: &ProblemSpec, sp: &ScheduleParams) -> Result<Sr2Step> {
    let d = p.dimension();
    check_dim(d, state.x.len())?;
    check_dim(d, state.v.len())?;
    let s = sp.step(state.a)?;
    let (a, a_next) = (s.a, s.a_next);
    let da = a_next - a;
    let c = 2.0 * (1.0 + sp.m() * a);

    let theta = da / a_next;
    let z: Vec<f64> = state
        .x
        .iter()
        .zip(&state.v)
        .map(|(x, v)| x + theta * (v - x))
        .collect();
    let grad_z = p.smooth.gradient(&z);

    let cx = a / da + sp.m() * a / c;
    let cz = sp.beta() * da / c;
    let cg = da / c;
    let y: Vec<f64> = (0..d)
        .map(|i| (cx * state.x[i] + cz * z[i] + state.v[i] - cg * grad_z[i]) / s.b_next)
        .collect();

    let x_next = p.nonsmooth.prox(&y, s.eta_next)?;
    let ratio = a / da;
    let v_next: Vec<f64> = x_next
        .iter()
        .zip(&state.x)
        .map(|(xn, x)| xn + ratio * (xn - x))
        .collect();
    if !all_finite(&x_next) || !all_finite(&v_next) {
        return Err(Error::Divergence);
    }
    Ok(Sr2Step {
        state: SolverState {
            k: state.k + 1,
            x: x_next,
            v: v_next,
            a: a_next,
            lipschitz: state.lipschitz,
        },
        z,
        grad_z,
        y,
        schedule: s,
        params: *sp,
    })
}

/// A proximal gradient step with its prox input.
#[derive(Debug, Clone)]
pub struct IstaStep {
    pub state: SolverState,
    pub y: Vec<f64>,
}

/// `x⁺ = prox_{ηh}(x − η∇g(x))`; `v` mirrors `x` and `A` is left untouched.
pub fn ista_step(state: &SolverState, p: &ProblemSpec, eta: f64) -> Result<IstaStep> {
    check_dim(p.dimension(), state.x.len())?;
    let cap = 1.0 / p.lipschitz();
    if !(eta > 0.0 && eta <= cap * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "ISTA step {eta} outside (0, 1/L_g]"
        )));
    }
    let grad = p.smooth.gradient(&state.x);
    let y: Vec<f64> = state
        .x
        .iter()
        .zip(&grad)
        .map(|(x, g)| x - eta * g)
        .collect();
    let x_next = p.nonsmooth.prox(&y, eta)?;
    if !all_finite(&x_next) {
        return Err(Error::Divergence);
    }
    Ok(IstaStep {
        state: SolverState {
            k: state.k + 1,
            v: x_next.clone(),
            x: x_next,
            a: state.a,
            lipschitz: state.lipschitz,
        },
        y,
    })
}

#[derive(Debug, Clone)]
pub struct BacktrackStep {
    pub step: Sr2Step,
    /// Number of times `L` was increased during this iteration.
    pub retries: usize,
}

/// Accelerated step with `L` adapted until
/// `g(x⁺) − g(z) ≤ ⟨∇g(z), x⁺ − z⟩ + (L/2)‖x⁺ − z‖²` holds at the new
/// iterate. `L` starts from `state.lipschitz` and only grows; `β` is
/// recomputed from each candidate `L`.
pub fn sr2fista_backtracking_step(
    state: &SolverState,
    p: &ProblemSpec,
    mode: BetaMode,
    bt: &Backtracking,
) -> Result<BacktrackStep> {
    let (mu_g, mu_h) = (p.mu_g(), p.mu_h());
    let mut lipschitz = state.lipschitz;
    let mut retries = 0;
    let mut trial = state.clone();
    loop {
        if lipschitz > MAX_BACKTRACK_LIPSCHITZ {
            return Err(Error::BacktrackingFailure { lipschitz });
        }
        let sp = match ScheduleParams::from_constants(lipschitz, mu_g, mu_h, mode) {
            Ok(sp) => sp,
            // L below β is never a valid Lipschitz constant.
            Err(Error::InvalidArgument(_)) => {
                lipschitz *= bt.increase_factor;
                retries += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        trial.lipschitz = lipschitz;
        let step = sr2fista_step(&trial, p, &sp)?;
        let dz = sub(&step.state.x, &step.z);
        let lhs = p.smooth.value_difference(&step.state.x, &step.z);
        let inner = dot(&step.grad_z, &dz);
        let quad = 0.5 * lipschitz * norm_sq(&dz);
        let slack = 1e-12 * (lhs.abs() + inner.abs() + quad);
        if lhs <= inner + quad + slack {
            return Ok(BacktrackStep { step, retries });
        }
        lipschitz *= bt.increase_factor;
        retries += 1;
    }
}

/// One row of the convergence log.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    /// `f(x_k) − f*` when the optimum is known, otherwise `f(x_k)`.
    pub f_gap: f64,
    pub lyapunov: Option<f64>,
    /// Scaled residual of the schedule step that produced `A_k`.
    pub schedule_residual: Option<f64>,
    /// Prox step that produced `x_k`.
    pub eta: Option<f64>,
    /// `2L‖x_0 − x*‖²/k²`.
    pub bound_sublinear: Option<f64>,
    /// `exp(−√(2q)k)(f(x_0) − f*)` with `q = μ/(L + μ_h)`.
    pub bound_linear: Option<f64>,
    pub a: Option<f64>,
    pub lipschitz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    TargetGap,
    ScheduleSaturated,
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub state: SolverState,
    pub trace: Vec<TraceRecord>,
    pub stop: StopReason,
    pub backtracking_retries: usize,
}

/// A completed iteration, handed to [`StepObserver`]s.
#[derive(Debug)]
pub struct StepRecord<'a> {
    pub before: &'a SolverState,
    pub after: &'a SolverState,
    /// Gradient evaluation point (`z_k`, or `x_k` for ISTA).
    pub z: &'a [f64],
    pub prox_input: &'a [f64],
    pub eta: f64,
    /// Schedule quantities of the accelerated step.
    pub schedule: Option<(ScheduleParams, ScheduleState)>,
}

impl StepRecord<'_> {
    /// `u = (y − x⁺)/η ∈ ∂h(x⁺)` recovered from the prox call.
    pub fn subgradient(&self) -> Vec<f64> {
        self.prox_input
            .iter()
            .zip(&self.after.x)
            .map(|(y, x)| (y - x) / self.eta)
            .collect()
    }
}

pub trait StepObserver {
    fn observe(&mut self, step: &StepRecord<'_>);
}

pub fn solve(
    p: &ProblemSpec,
    cfg: &SolverConfig,
    x0: Vec<f64>,
    algorithm: Algorithm,
) -> Result<SolveOutput> {
    solve_observed(p, cfg, x0, algorithm, None)
}

/// Runs `algorithm` from `x0` until `max_iters`, the target gap, or
/// schedule saturation. Trace rows are taken at `k = 0`, every
/// `trace_every` steps, and at the final iterate.
pub fn solve_observed(
    p: &ProblemSpec,
    cfg: &SolverConfig,
    x0: Vec<f64>,
    algorithm: Algorithm,
    mut observer: Option<&mut dyn StepObserver>,
) -> Result<SolveOutput> {
    cfg.validate()?;
    check_dim(p.dimension(), x0.len())?;
    if cfg.target_gap.is_some() && p.optimum().is_none() {
        return Err(Error::InvalidArgument(
            "target gap needs a known optimum".into(),
        ));
    }
    let backtracking = match algorithm {
        Algorithm::Sr2Fista => cfg.backtracking,
        Algorithm::Ista => None,
    };
    let l0 = backtracking.map_or(p.lipschitz(), |b| b.initial_lipschitz);
    let ista_eta = cfg.ista_step.unwrap_or(1.0 / p.lipschitz());

    let refs = TraceRefs::new(p, &x0)?;
    let mut state = SolverState::new(x0, l0);
    // Parameters of the latest accelerated step; used for E_k and residuals.
    let mut last: Option<(ScheduleParams, ScheduleState)> = None;
    let mut last_eta: Option<f64> = None;
    let initial_params = match algorithm {
        Algorithm::Sr2Fista if backtracking.is_none() => {
            Some(ScheduleParams::for_problem(p, cfg.beta_mode)?)
        }
        _ => None,
    };
    let mut retries_total = 0;
    let mut trace = Vec::new();

    let row = record(p, &state, last.as_ref(), last_eta, algorithm, &refs)?;
    let hit = reached_target(cfg, &row);
    trace.push(row);
    if hit {
        return Ok(SolveOutput {
            state,
            trace,
            stop: StopReason::TargetGap,
            backtracking_retries: 0,
        });
    }

    let mut stop = StopReason::MaxIters;
    let mut recorded_k = 0;
    while state.k < cfg.max_iters {
        let k = state.k;
        let outcome = match algorithm {
            Algorithm::Sr2Fista => {
                let res = match &backtracking {
                    Some(bt) => sr2fista_backtracking_step(&state, p, cfg.beta_mode, bt).map(|b| {
                        retries_total += b.retries;
                        b.step
                    }),
                    None => sr2fista_step(&state, p, initial_params.as_ref().expect("params")),
                };
                res.map(|s| {
                    let sched = (s.params, s.schedule);
                    (s.state, s.z, s.y, s.schedule.eta_next, Some(sched))
                })
            }
            Algorithm::Ista => ista_step(&state, p, ista_eta)
                .map(|s| (s.state, state.x.clone(), s.y, ista_eta, None)),
        };
        let (next, z, y, eta, sched) = match outcome {
            Ok(o) => o,
            Err(Error::ScheduleSaturated { .. }) => {
                stop = StopReason::ScheduleSaturated;
                break;
            }
            Err(e) => return Err(e.at(k)),
        };
        if let Some(obs) = observer.as_deref_mut() {
            obs.observe(&StepRecord {
                before: &state,
                after: &next,
                z: &z,
                prox_input: &y,
                eta,
                schedule: sched,
            });
        }
        state = next;
        last = sched;
        last_eta = Some(eta);

        if state.k.is_multiple_of(cfg.trace_every) || state.k == cfg.max_iters {
            let row = record(p, &state, last.as_ref(), last_eta, algorithm, &refs)
                .map_err(|e| e.at(state.k))?;
            let hit = reached_target(cfg, &row);
            trace.push(row);
            recorded_k = state.k;
            if hit {
                stop = StopReason::TargetGap;
                break;
            }
        }
    }
    if recorded_k != state.k {
        trace.push(record(
            p,
            &state,
            last.as_ref(),
            last_eta,
            algorithm,
            &refs,
        )?);
    }
    Ok(SolveOutput {
        state,
        trace,
        stop,
        backtracking_retries: retries_total,
    })
}

fn reached_target(cfg: &SolverConfig, row: &TraceRecord) -> bool {
    matches!(cfg.target_gap, Some(t) if row.f_gap <= t)
}

/// Reference quantities fixed at `x_0`.
struct TraceRefs {
    x0_dist_sq: Option<f64>,
    gap0: Option<f64>,
}

impl TraceRefs {
    fn new(p: &ProblemSpec, x0: &[f64]) -> Result<Self> {
        Ok(match p.optimum() {
            Some(o) => Self {
                x0_dist_sq: Some(dist_sq(x0, &o.x_star)),
                gap0: Some(p.gap(x0)?),
            },
            None => Self {
                x0_dist_sq: None,
                gap0: None,
            },
        })
    }
}

fn record(
    p: &ProblemSpec,
    state: &SolverState,
    last: Option<&(ScheduleParams, ScheduleState)>,
    eta: Option<f64>,
    algorithm: Algorithm,
    refs: &TraceRefs,
) -> Result<TraceRecord> {
    let known = p.optimum().is_some();
    let f_gap = if known {
        p.gap(&state.x)?
    } else {
        p.evaluate_f(&state.x)?
    };
    let lyapunov = match (algorithm, known) {
        (Algorithm::Sr2Fista, true) => match last {
            Some((sp, _)) => Some(lyapunov_discrete(&state.x, &state.v, state.a, p, sp)?),
            None => refs.x0_dist_sq,
        },
        _ => None,
    };
    let k = state.k as f64;
    let l = state.lipschitz;
    let q = p.mu() / (l + p.mu_h());
    Ok(TraceRecord {
        k: state.k,
        f_gap,
        lyapunov,
        schedule_residual: last.map(|(sp, s)| relative_residual(s.a, s.a_next, sp)),
        eta,
        bound_sublinear: refs.x0_dist_sq.map(|d| 2.0 * l * d / (k * k)),
        bound_linear: refs.gap0.map(|g| (-(2.0 * q).sqrt() * k).exp() * g),
        a: matches!(algorithm, Algorithm::Sr2Fista).then_some(state.a),
        lipschitz: l,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::prox::Regularizer;
    use crate::smooth::DiagonalQuadratic;

    fn quadratic(weights: Vec<f64>, centers: Vec<f64>, h: Regularizer) -> ProblemSpec {
        let d = weights.len();
        let g = Arc::new(DiagonalQuadratic::new(weights, centers).unwrap());
        ProblemSpec::new(g, Arc::new(h), d).unwrap()
    }

    #[test]
    fn first_step_starts_at_x0() {
        let p = quadratic(
            vec![1.0, 3.0],
            vec![1.0, -1.0],
            Regularizer::l1(0.1).unwrap(),
        );
        let sp = ScheduleParams::for_problem(&p, BetaMode::Compromised).unwrap();
        let s0 = SolverState::new(vec![2.0, 5.0], p.lipschitz());
        let step = sr2fista_step(&s0, &p, &sp).unwrap();
        assert_eq!(step.z, s0.x);
        assert_eq!(step.state.k, 1);
        // A_0 = 0 so v_1 = x_1
        assert_eq!(step.state.v, step.state.x);
    }

    #[test]
    fn flat_first_step_is_gradient_step() {
        // μ_g = 0 through a zero weight, h = 0, β = γ = 0.
        let p = quadratic(vec![0.0, 4.0], vec![1.0, -1.0], Regularizer::Zero);
        let sp = ScheduleParams::new(4.0, 0.0, 0.0).unwrap();
        let x0 = vec![3.0, 2.0];
        let step = sr2fista_step(&SolverState::new(x0.clone(), 4.0), &p, &sp).unwrap();
        let g = p.smooth.gradient(&x0);
        for i in 0..2 {
            let expect = x0[i] - g[i] / 4.0;
            assert!((step.state.x[i] - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn ista_exact_on_unit_quadratic() {
        let p = quadratic(vec![1.0; 3], vec![0.0; 3], Regularizer::Zero);
        let s = ista_step(&SolverState::new(vec![1.0, -2.0, 3.0], 1.0), &p, 1.0).unwrap();
        assert_eq!(s.state.x, vec![0.0; 3]);
        assert!(ista_step(&s.state, &p, 1.5).is_err());
    }

    #[test]
    fn ista_fixed_point_at_optimum() {
        // x* = soft(c, λ/w) coordinatewise
        let p = quadratic(
            vec![2.0, 1.0],
            vec![3.0, 0.25],
            Regularizer::l1(1.0).unwrap(),
        );
        let xs = vec![2.5, 0.0];
        let s = ista_step(&SolverState::new(xs.clone(), 2.0), &p, 0.5).unwrap();
        assert_eq!(s.state.x, xs);
    }

    #[test]
    fn zero_iterations_trace_only_start() {
        let p = quadratic(vec![1.0, 2.0], vec![0.0; 2], Regularizer::Zero)
            .with_optimum(vec![0.0; 2])
            .unwrap();
        let cfg = SolverConfig {
            max_iters: 0,
            ..Default::default()
        };
        let out = solve(&p, &cfg, vec![1.0, 1.0], Algorithm::Sr2Fista).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].k, 0);
        assert_eq!(out.trace[0].lyapunov, Some(2.0));
        assert_eq!(out.stop, StopReason::MaxIters);
    }

    #[test]
    fn infinite_target_stops_immediately() {
        let p = quadratic(vec![1.0, 2.0], vec![0.0; 2], Regularizer::Zero)
            .with_optimum(vec![0.0; 2])
            .unwrap();
        let cfg = SolverConfig {
            target_gap: Some(f64::INFINITY),
            ..Default::default()
        };
        let out = solve(&p, &cfg, vec![1.0, 1.0], Algorithm::Sr2Fista).unwrap();
        assert_eq!(out.stop, StopReason::TargetGap);
        assert_eq!(out.state.k, 0);
    }

    #[test]
    fn target_gap_needs_optimum() {
        let p = quadratic(vec![1.0], vec![0.0], Regularizer::Zero);
        let cfg = SolverConfig {
            target_gap: Some(1e-3),
            ..Default::default()
        };
        assert!(solve(&p, &cfg, vec![1.0], Algorithm::Sr2Fista).is_err());
    }

    #[test]
    fn trace_sampling_includes_final_row() {
        let p = quadratic(vec![1.0, 10.0], vec![0.0; 2], Regularizer::Zero)
            .with_optimum(vec![0.0; 2])
            .unwrap();
        let cfg = SolverConfig {
            max_iters: 25,
            trace_every: 10,
            ..Default::default()
        };
        let out = solve(&p, &cfg, vec![1.0, 1.0], Algorithm::Sr2Fista).unwrap();
        let ks: Vec<usize> = out.trace.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![0, 10, 20, 25]);
    }

    #[test]
    fn unknown_optimum_logs_raw_objective() {
        let p = quadratic(vec![1.0, 1.0], vec![1.0, 1.0], Regularizer::Zero);
        let cfg = SolverConfig {
            max_iters: 3,
            ..Default::default()
        };
        let out = solve(&p, &cfg, vec![0.0, 0.0], Algorithm::Sr2Fista).unwrap();
        assert_eq!(out.trace[0].f_gap, 1.0);
        assert!(out
            .trace
            .iter()
            .all(|r| r.lyapunov.is_none() && r.bound_linear.is_none()));
    }

    #[test]
    fn saturation_stops_cleanly() {
        // Large q makes A_k grow by a big factor per step.
        let p = quadratic(vec![1.0, 1.5], vec![0.0; 2], Regularizer::Zero)
            .with_optimum(vec![0.0; 2])
            .unwrap();
        let cfg = SolverConfig {
            max_iters: 100_000,
            trace_every: 1000,
            ..Default::default()
        };
        let out = solve(&p, &cfg, vec![1.0, 1.0], Algorithm::Sr2Fista).unwrap();
        assert_eq!(out.stop, StopReason::ScheduleSaturated);
        assert!(out.state.k < 100_000);
        assert_eq!(out.trace.last().unwrap().k, out.state.k);
    }

    #[test]
    fn backtracking_from_true_constant_never_retries() {
        let p = quadratic(
            vec![1.0, 50.0, 7.0],
            vec![1.0, 2.0, 3.0],
            Regularizer::l1(0.5).unwrap(),
        );
        let bt = Backtracking {
            increase_factor: 2.0,
            initial_lipschitz: 50.0,
        };
        let mut s = SolverState::new(vec![0.0; 3], 50.0);
        for _ in 0..200 {
            let b = sr2fista_backtracking_step(&s, &p, BetaMode::Compromised, &bt).unwrap();
            assert_eq!(b.retries, 0);
            s = b.step.state;
        }
    }

    #[test]
    fn backtracking_retry_count_is_bounded() {
        let l = 1024.0;
        let p = quadratic(vec![1.0, l], vec![1.0, 2.0], Regularizer::Zero);
        let bt = Backtracking {
            increase_factor: 2.0,
            initial_lipschitz: l / 1024.0,
        };
        let s = SolverState::new(vec![0.0; 2], bt.initial_lipschitz);
        let b = sr2fista_backtracking_step(&s, &p, BetaMode::Compromised, &bt).unwrap();
        assert!(b.retries <= 10);
        assert!(b.step.state.lipschitz <= l);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig {
            trace_every: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        cfg.trace_every = 1;
        cfg.backtracking = Some(Backtracking {
            increase_factor: 1.0,
            initial_lipschitz: 1.0,
        });
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn algorithm_parsing() {
        assert_eq!("ista".parse::<Algorithm>().unwrap(), Algorithm::Ista);
        assert_eq!(Algorithm::Sr2Fista.to_string(), "sr2fista");
        assert!("fista".parse::<Algorithm>().is_err());
    }
}

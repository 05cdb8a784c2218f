//! Per-step certificate collection.

use sr2fista::diagnostics::{
    lyapunov_discrete, lyapunov_resolution, sample_wdg, Certificate, Location, WdgSampling,
    LYAPUNOV_TOLERANCE, SCHEDULE_TOLERANCE,
};
use sr2fista::schedule::relative_residual;
use sr2fista::solver::{StepObserver, StepRecord};
use sr2fista::{BetaMode, ProblemSpec, ScheduleParams};

/// Largest admissible value of `η·|μ_h|`; the prox is ill-posed at 1.
pub const PROX_RATIO_LIMIT: f64 = 1.0 - f64::EPSILON;

#[derive(Debug, Clone, Copy)]
struct Worst {
    value: f64,
    at: Option<Location>,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            at: None,
        }
    }

    fn push(&mut self, v: f64, k: usize) {
        if v > self.value || v.is_nan() && !self.value.is_nan() {
            self.value = v;
            self.at = Some(Location::Iteration(k));
        }
    }
}

/// Watches every step of a run.
///
/// For accelerated steps `E` is evaluated before and after the step under
/// that step's parameters, so runs with backtracking are checked against
/// the constants actually used. Increases within
/// [`lyapunov_resolution`] of either state are not counted.
pub struct RunCertifier<'a> {
    problem: &'a ProblemSpec,
    e0: Option<f64>,
    lyapunov: Worst,
    schedule: Worst,
    prox: Worst,
    accelerated: bool,
    error: Option<String>,
}

impl<'a> RunCertifier<'a> {
    pub fn new(problem: &'a ProblemSpec) -> Self {
        Self {
            problem,
            e0: None,
            lyapunov: Worst::new(),
            schedule: Worst::new(),
            prox: Worst::new(),
            accelerated: false,
            error: None,
        }
    }

    fn lyapunov_step(
        &mut self,
        step: &StepRecord<'_>,
        sp: &ScheduleParams,
    ) -> sr2fista::Result<()> {
        let (b, a) = (step.before, step.after);
        let before = lyapunov_discrete(&b.x, &b.v, b.a, self.problem, sp)?;
        let after = lyapunov_discrete(&a.x, &a.v, a.a, self.problem, sp)?;
        let slack = lyapunov_resolution(&b.x, &b.v, b.a, self.problem, sp)?
            + lyapunov_resolution(&a.x, &a.v, a.a, self.problem, sp)?;
        let e0 = *self.e0.get_or_insert(before);
        self.lyapunov
            .push((after - before - slack).max(0.0) / e0.max(1.0), a.k);
        Ok(())
    }

    /// Lyapunov and schedule certificates for accelerated runs, then prox
    /// well-definedness for every run.
    pub fn certificates(&self) -> Vec<Certificate> {
        let mut out = Vec::new();
        if self.accelerated {
            let lyapunov = match &self.error {
                Some(_) => f64::NAN,
                None => self.lyapunov.value,
            };
            out.push(Certificate::new(
                "lyapunov",
                lyapunov,
                LYAPUNOV_TOLERANCE,
                self.lyapunov.at,
            ));
            out.push(Certificate::new(
                "schedule_equality",
                self.schedule.value,
                SCHEDULE_TOLERANCE,
                self.schedule.at,
            ));
        }
        out.push(Certificate::new(
            "prox_well_defined",
            self.prox.value,
            PROX_RATIO_LIMIT,
            self.prox.at,
        ));
        out
    }

    pub fn error(&self) -> Option<&str> {
        self.error.as_deref()
    }
}

impl StepObserver for RunCertifier<'_> {
    fn observe(&mut self, step: &StepRecord<'_>) {
        let k = step.after.k;
        let mu_h = self.problem.mu_h();
        let ratio = if mu_h < 0.0 { -step.eta * mu_h } else { 0.0 };
        let finite = step.after.x.iter().all(|x| x.is_finite());
        self.prox.push(if finite { ratio } else { f64::NAN }, k);
        if let Some((sp, s)) = step.schedule {
            self.accelerated = true;
            self.schedule
                .push(relative_residual(s.a, s.a_next, &sp).abs(), k);
            if self.problem.optimum().is_some() && self.error.is_none() {
                if let Err(e) = self.lyapunov_step(step, &sp) {
                    self.error = Some(format!("lyapunov at k={k}: {e}"));
                }
            }
        }
    }
}

/// wDG inequality on random triples under the problem's own constants.
pub fn wdg_certificate(
    p: &ProblemSpec,
    mode: BetaMode,
    samples: usize,
    seed: u64,
) -> sr2fista::Result<Certificate> {
    let sp = ScheduleParams::for_problem(p, mode)?;
    sample_wdg(
        p,
        &sp,
        WdgSampling {
            samples,
            seed,
            spread: 1.0,
        },
    )
}

//! The composite model `f = g + h`.
//!
//! `g` is differentiable with an `L_g`-Lipschitz gradient and is
//! `μ_g`-strongly convex; `h` is `μ_h`-strongly convex and prox-friendly.
//! Either constant may be negative as long as `μ = μ_g + μ_h ≥ 0`.

use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{norm_inf, norm_sq};

/// Differentiable part of the objective.
pub trait SmoothOracle: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    fn gradient_into(&self, x: &[f64], out: &mut [f64]);

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.gradient_into(x, &mut out);
        out
    }

    /// `g(x) − g(y)`; implementations override this when they can avoid the
    /// cancellation of subtracting two large values.
    fn value_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        self.value(x) - self.value(y)
    }

    /// `L_g`.
    fn lipschitz(&self) -> f64;

    /// `μ_g`, possibly negative.
    fn strong_convexity(&self) -> f64;
}

/// Nonsmooth part of the objective, accessed through its proximal map.
pub trait ProxOracle: Send + Sync {
    /// May return `+∞` (indicators).
    fn value(&self, x: &[f64]) -> f64;

    fn value_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        self.value(x) - self.value(y)
    }

    /// Writes `prox_{η h}(x)` into `out`. Fails with
    /// [`Error::IllPosedProx`] when `h` is weakly convex and `η ≥ −1/μ_h`.
    fn prox_into(&self, x: &[f64], eta: f64, out: &mut [f64]) -> Result<()>;

    fn prox(&self, x: &[f64], eta: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; x.len()];
        self.prox_into(x, eta, &mut out)?;
        Ok(out)
    }

    /// `μ_h`, possibly negative.
    fn strong_convexity(&self) -> f64;

    /// True when `h ≡ 0`.
    fn is_zero(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub x_star: Vec<f64>,
    pub f_star: f64,
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub smooth: Arc<dyn SmoothOracle>,
    pub nonsmooth: Arc<dyn ProxOracle>,
    dimension: usize,
    optimum: Option<Optimum>,
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("dimension", &self.dimension)
            .field("lipschitz", &self.smooth.lipschitz())
            .field("mu_g", &self.smooth.strong_convexity())
            .field("mu_h", &self.nonsmooth.strong_convexity())
            .field("f_star", &self.optimum.as_ref().map(|o| o.f_star))
            .finish()
    }
}

impl ProblemSpec {
    pub fn new(
        smooth: Arc<dyn SmoothOracle>,
        nonsmooth: Arc<dyn ProxOracle>,
        dimension: usize,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let (mu_g, mu_h) = (smooth.strong_convexity(), nonsmooth.strong_convexity());
        let l = smooth.lipschitz();
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "L_g must be positive, got {l}"
            )));
        }
        // μ_g + μ_h may land a few ulps below zero after a reformulation shift.
        if mu_g + mu_h < -1e-12 * (1.0 + mu_g.abs() + mu_h.abs()) {
            return Err(Error::InvalidArgument(format!(
                "composite objective is not convex: mu_g + mu_h = {} < 0",
                mu_g + mu_h
            )));
        }
        Ok(Self {
            smooth,
            nonsmooth,
            dimension,
            optimum: None,
        })
    }

    /// Attaches a known minimizer; `f*` is evaluated from it.
    pub fn with_optimum(mut self, x_star: Vec<f64>) -> Result<Self> {
        let f_star = self.evaluate_f(&x_star)?;
        if !f_star.is_finite() {
            return Err(Error::InvalidArgument(
                "optimum has non-finite objective".into(),
            ));
        }
        self.optimum = Some(Optimum { x_star, f_star });
        Ok(self)
    }

    /// Attaches a known minimizer with a stated `f*`, which must agree with
    /// `f(x*)` to 1e-10 relative.
    pub fn with_optimum_value(mut self, x_star: Vec<f64>, f_star: f64) -> Result<Self> {
        let f = self.evaluate_f(&x_star)?;
        if !((f - f_star).abs() <= 1e-10 * f_star.abs().max(1.0)) {
            return Err(Error::InvalidArgument(format!(
                "stated f* = {f_star} disagrees with f(x*) = {f}"
            )));
        }
        self.optimum = Some(Optimum { x_star, f_star });
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn optimum(&self) -> Option<&Optimum> {
        self.optimum.as_ref()
    }

    pub fn lipschitz(&self) -> f64 {
        self.smooth.lipschitz()
    }

    pub fn mu_g(&self) -> f64 {
        self.smooth.strong_convexity()
    }

    pub fn mu_h(&self) -> f64 {
        self.nonsmooth.strong_convexity()
    }

    /// `μ = μ_g + μ_h`.
    pub fn mu(&self) -> f64 {
        self.mu_g() + self.mu_h()
    }

    pub fn evaluate_f(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension, x.len())?;
        Ok(self.smooth.value(x) + self.nonsmooth.value(x))
    }

    /// `f(x) − f*`, computed through the oracles' difference methods.
    pub fn gap(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension, x.len())?;
        let opt = self.optimum.as_ref().ok_or(Error::MissingOptimum)?;
        let dg = self.smooth.value_difference(x, &opt.x_star);
        let dh = self.nonsmooth.value_difference(x, &opt.x_star);
        Ok(dg + dh)
    }

    /// Moves the curvature of `h` into `g`:
    /// `ĝ = g + (μ_h/2)‖·‖²`, `ĥ = h − (μ_h/2)‖·‖²`, so that `μ_ĥ = 0`.
    pub fn reformulate_convex(&self) -> ProblemSpec {
        let shift = self.mu_h();
        if shift == 0.0 {
            return self.clone();
        }
        ProblemSpec {
            smooth: Arc::new(ShiftedSmooth {
                inner: self.smooth.clone(),
                shift,
            }),
            nonsmooth: Arc::new(ShiftedProx {
                inner: self.nonsmooth.clone(),
                shift,
            }),
            dimension: self.dimension,
            optimum: self.optimum.clone(),
        }
    }
}

/// `g(x) + (shift/2)‖x‖²`.
struct ShiftedSmooth {
    inner: Arc<dyn SmoothOracle>,
    shift: f64,
}

impl SmoothOracle for ShiftedSmooth {
    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x) + 0.5 * self.shift * norm_sq(x)
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.inner.gradient_into(x, out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o += self.shift * xi;
        }
    }

    fn value_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        let quad: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a + b)).sum();
        self.inner.value_difference(x, y) + 0.5 * self.shift * quad
    }

    fn lipschitz(&self) -> f64 {
        self.inner.lipschitz() + self.shift
    }

    fn strong_convexity(&self) -> f64 {
        self.inner.strong_convexity() + self.shift
    }
}

/// `h(x) − (shift/2)‖x‖²`, with its prox expressed through the prox of `h`.
struct ShiftedProx {
    inner: Arc<dyn ProxOracle>,
    shift: f64,
}

impl ProxOracle for ShiftedProx {
    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x) - 0.5 * self.shift * norm_sq(x)
    }

    fn value_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        let quad: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a + b)).sum();
        self.inner.value_difference(x, y) - 0.5 * self.shift * quad
    }

    fn prox_into(&self, x: &[f64], eta: f64, out: &mut [f64]) -> Result<()> {
        let scale = 1.0 - self.shift * eta;
        if !(scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "shifted prox needs 1 - mu_h*eta > 0, got {scale}"
            )));
        }
        let scaled: Vec<f64> = x.iter().map(|xi| xi / scale).collect();
        self.inner.prox_into(&scaled, eta / scale, out)
    }

    fn strong_convexity(&self) -> f64 {
        self.inner.strong_convexity() - self.shift
    }
}

/// Result of comparing analytic gradients against central differences.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientReport {
    /// `max |fd_i − ∇g_i| / max(1, ‖∇g‖∞)` over the checked coordinates.
    pub max_relative_deviation: f64,
    pub worst_sample: usize,
    pub worst_coordinate: usize,
}

/// Coordinates checked per sample point in high dimension.
const MAX_CHECKED_COORDS: usize = 256;

/// Central-difference gradient check of `g` at `samples` points drawn
/// uniformly from `[-1, 1]^d`. Perturbation is `1e-6·(1 + ‖x‖)`. Above
/// 256 dimensions a random subset of coordinates is checked at each point.
pub fn check_gradient(p: &ProblemSpec, samples: usize, seed: u64) -> Result<GradientReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let d = p.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = GradientReport {
        max_relative_deviation: 0.0,
        worst_sample: 0,
        worst_coordinate: 0,
    };
    let mut grad = vec![0.0; d];
    for s in 0..samples {
        let mut x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        p.smooth.gradient_into(&x, &mut grad);
        let scale = norm_inf(&grad).max(1.0);
        let step = 1e-6 * (1.0 + norm_sq(&x).sqrt());
        let coords: Vec<usize> = if d <= MAX_CHECKED_COORDS {
            (0..d).collect()
        } else {
            (0..MAX_CHECKED_COORDS)
                .map(|_| rng.random_range(0..d))
                .collect()
        };
        for i in coords {
            let xi = x[i];
            x[i] = xi + step;
            let fp = p.smooth.value(&x);
            x[i] = xi - step;
            let fm = p.smooth.value(&x);
            x[i] = xi;
            let fd = (fp - fm) / (2.0 * step);
            let dev = (fd - grad[i]).abs() / scale;
            if dev > report.max_relative_deviation || dev.is_nan() {
                report = GradientReport {
                    max_relative_deviation: dev,
                    worst_sample: s,
                    worst_coordinate: i,
                };
            }
        }
    }
    Ok(report)
}

//! Accelerated forward-backward splitting for `min f = g + h`, where `g` is
//! smooth and `h` has a cheap proximal map and may be weakly convex.
//!
//! The crate provides the step-size schedule, the accelerated solver and a
//! proximal-gradient baseline, closed-form proxes for ℓ1, MCP and SCAD, an
//! RK4 integrator for the continuous-time model, and numerical certificates
//! for the inequalities that drive the convergence analysis.

pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod ode;
pub mod problem;
pub mod prox;
pub mod schedule;
pub mod smooth;
pub mod solver;
pub mod zoo;

pub use error::{Error, Result};
pub use problem::{check_gradient, Optimum, ProblemSpec, ProxOracle, SmoothOracle};
pub use prox::{BoxIndicator, McpParams, Regularizer, ScadParams};
pub use schedule::{BetaMode, ScheduleParams};
pub use smooth::{DiagonalQuadratic, LeastSquares};
pub use solver::{
    solve, solve_observed, Algorithm, Backtracking, SolveOutput, SolverConfig, StopReason,
    TraceRecord,
};

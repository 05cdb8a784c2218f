//! Benchmark harness around the `sr2fista` solvers.
//!
//! Builds a problem, runs the accelerated method and/or ISTA, writes one CSV
//! trace per run (optionally an SVG plot), and checks certificates: Lyapunov
//! monotonicity, the schedule equality, the weak discrete gradient
//! inequality on random samples, and well-definedness of every prox call.

pub mod certify;
pub mod config;
pub mod error;
pub mod output;
pub mod problems;
pub mod run;
pub mod svg;

pub use config::{
    parse_backtracking, AlgorithmChoice, BenchConfig, InstanceParams, ProblemKind, RegularizerKind,
};
pub use error::BenchError;
pub use run::{run_benchmark, BenchReport, RunReport};
